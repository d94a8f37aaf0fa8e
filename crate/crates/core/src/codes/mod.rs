//! Code matrices, Hamming metrics, pluralities and exact list-decoding oracles.

mod decode;
mod matrix;
mod metric;
mod search;

pub use decode::{
    is_avg_radius_list_decodable, is_list_decodable, min_list_bound, plurality_center, LdReport, ReportMode,
    SearchMode, Verdict, DEFAULT_CAP,
};
pub use matrix::{Alphabet, CodeMatrix};
pub use metric::{
    agreement, ball_intersection_size, ball_members, code_min_distance, hamming_ball_volume, hamming_distance,
    max_agreement_sum, max_agreement_sum_exhaustive, min_abs_distance, plurality_vector,
};
pub use search::{search_lambda, SearchOptions};

#[allow(unused_imports)]
pub(crate) use metric::{check_lambda, dist, plurality_sum_unchecked};
