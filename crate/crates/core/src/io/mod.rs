//! File formats: PGM images, CSV probability and score tables.

pub mod pgm;
pub mod records;

pub use pgm::{read_image_pgm, read_image_rgb_planes, write_image_pgm};
pub use records::{
    read_prob_csv, read_records_csv, read_score_table, write_records_csv, write_score_table, Label,
    ScoreRecord, ScoreTableRow,
};
