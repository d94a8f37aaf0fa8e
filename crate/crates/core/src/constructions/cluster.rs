//! Cluster code: every center of a random inner code is replaced by a few
//! distinct words at distance 1 from it. Random subcodes of it tend to keep a
//! whole cluster, so their list size at radius `1/n` stays large.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::random_code;
use crate::codes::{dist, is_list_decodable, min_abs_distance, CodeMatrix, LdReport, SearchMode};
use crate::col_ops::{draw_subcode, SizeSpec};
use crate::error::{Error, Result};
use crate::ratio::{to_f64, Ratio64};
use crate::row_ops::Replacement;
use crate::seed;

const MAX_CENTER_RETRIES: usize = 64;
const MAX_CENTERS: f64 = (1u64 << 22) as f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub rho: Ratio64,
    /// Smallest `beta > 0` with `1 - rho - beta = 2^-j`.
    pub beta: Ratio64,
    /// `j`, i.e. `log2(1 / (1 - rho - beta))` (base 2).
    pub log2_inv: u32,
    /// Rate of the center code, `(1 - rho - beta) / 6`.
    pub r: Ratio64,
    /// `r / 3`.
    pub d: Ratio64,
    /// `floor(beta n / (8 j)) - 1`.
    pub cluster_size: usize,
    /// `floor(q^(r n))`.
    pub centers: usize,
    pub q: u64,
    pub n: usize,
    /// Whether `q >= 2^(1/r)`, the alphabet condition for random centers.
    pub q_precondition_met: bool,
}

/// Parameters of the construction at `(rho, n, q)`.
pub fn cluster_params(rho: Ratio64, n: usize, q: u64) -> Result<ClusterParams> {
    let one = Ratio64::from_integer(1);
    if *rho.numer() == 0 || rho >= one {
        return Err(Error::input(format!("rho = {rho} must lie in (0, 1)")));
    }
    if q < 2 {
        return Err(Error::input("q must be at least 2"));
    }
    let mut j = 1u32;
    while Ratio64::new(1, 1u64 << j) >= one - rho {
        j += 1;
    }
    let pow = Ratio64::new(1, 1u64 << j);
    let beta = one - rho - pow;
    let r = pow / 6;
    let num = *beta.numer() as u128 * n as u128;
    let den = *beta.denom() as u128 * 8 * j as u128;
    let cluster_size = (num / den) as i64 - 1;
    if cluster_size < 1 {
        return Err(Error::input(format!(
            "cluster size floor(beta n / (8 j)) - 1 = {cluster_size} < 1 at n = {n}; need n >= {}",
            smallest_feasible_n(rho)?
        )));
    }
    let log_centers = to_f64(r) * n as f64 * (q as f64).log2();
    let centers = 2f64.powf(log_centers);
    if centers > MAX_CENTERS {
        return Err(Error::Budget { what: "cluster centers", needed: centers as u128, cap: MAX_CENTERS as u128 });
    }
    // tolerate rounding just below an exact integer
    let centers = (centers + 1e-9).floor().max(1.0) as usize;
    Ok(ClusterParams {
        rho,
        beta,
        log2_inv: j,
        r,
        d: r / 3,
        cluster_size: cluster_size as usize,
        centers,
        q,
        n,
        q_precondition_met: (q as f64).log2() >= 1.0 / to_f64(r),
    })
}

/// Smallest `n` with cluster size at least 1.
pub fn smallest_feasible_n(rho: Ratio64) -> Result<usize> {
    let one = Ratio64::from_integer(1);
    if *rho.numer() == 0 || rho >= one {
        return Err(Error::input(format!("rho = {rho} must lie in (0, 1)")));
    }
    let mut j = 1u32;
    while Ratio64::new(1, 1u64 << j) >= one - rho {
        j += 1;
    }
    let beta = one - rho - Ratio64::new(1, 1u64 << j);
    // floor(beta n / 8j) >= 2  <=>  n >= 16 j / beta
    let need = Ratio64::from_integer(16 * j as u64) / beta;
    Ok(need.ceil().to_integer() as usize)
}

#[derive(Debug, Clone)]
pub struct ClusterCode {
    pub c0: CodeMatrix,
    pub centers: CodeMatrix,
    /// Center index of each column of `c0`.
    pub cluster_of: Vec<usize>,
    pub params: ClusterParams,
    /// Center draws rejected for distance `< 3` before one was accepted.
    pub retries: usize,
}

impl ClusterCode {
    /// Columns of `c0` belonging to center `i`, in construction order.
    pub fn cluster(&self, i: usize) -> std::ops::Range<usize> {
        let s = self.params.cluster_size;
        i * s..(i + 1) * s
    }

    /// Sidecar metadata accompanying the `c0` code file.
    pub fn sidecar_json(&self, centers_file: &str) -> serde_json::Value {
        serde_json::json!({
            "params": self.params,
            "centers_file": centers_file,
            "cluster_of": self.cluster_of,
            "retries": self.retries,
        })
    }
}

/// Builds the cluster code. Members of the cluster around `c` are `c + e_i`
/// (coordinate `i` bumped by 1 mod q) for `i = 0, 1, ...`.
pub fn build_cluster_code(rho: Ratio64, n: usize, q: u64, seed: u64) -> Result<ClusterCode> {
    let params = cluster_params(rho, n, q)?;
    for attempt in 0..MAX_CENTER_RETRIES {
        let centers = random_code(q, n, params.centers, seed::derive_seed(seed, "cluster-centers", attempt as u64))?;
        let ok = centers.len() == 1 || (centers.distinct_count() == centers.len() && min_abs_distance(&centers)? >= 3);
        if !ok {
            continue;
        }
        let s = params.cluster_size;
        let mut words = Vec::with_capacity(centers.len() * s);
        let mut cluster_of = Vec::with_capacity(centers.len() * s);
        for (ci, c) in centers.codewords().enumerate() {
            for i in 0..s {
                let mut w = c.to_vec();
                w[i] = (w[i] + 1) % q;
                words.push(w);
                cluster_of.push(ci);
            }
        }
        let c0 = CodeMatrix::from_codewords(q, &words)?;
        if c0.distinct_count() != c0.len() {
            return Err(Error::Construction("clusters overlap despite center distance >= 3".into()));
        }
        return Ok(ClusterCode { c0, centers, cluster_of, params, retries: attempt });
    }
    Err(Error::Construction(format!(
        "no center code with distance >= 3 in {MAX_CENTER_RETRIES} draws at q = {q}, n = {n}, {} centers",
        params.centers
    )))
}

#[derive(Debug, Clone)]
pub struct CenterCheck {
    pub gamma: Ratio64,
    /// `ceil(1 / (gamma - 2r))`.
    pub list_bound: usize,
    pub report: LdReport,
}

/// Powers of 1/2 in `(2r, 1]`.
pub fn center_gammas(r: Ratio64) -> Vec<Ratio64> {
    let mut out = Vec::new();
    let mut g = Ratio64::from_integer(1);
    while g > r * 2 {
        out.push(g);
        g /= 2;
    }
    out
}

/// Exhaustively checks `(1 - gamma, ceil(1/(gamma - 2r)))`-list decodability
/// of the center code for each `gamma`.
pub fn verify_random_centers(cstar: &CodeMatrix, r: Ratio64, gammas: &[Ratio64], cap: u128) -> Result<Vec<CenterCheck>> {
    let one = Ratio64::from_integer(1);
    gammas
        .iter()
        .map(|&gamma| {
            let is_pow2 = *gamma.numer() == 1 && gamma.denom().is_power_of_two();
            if !is_pow2 || gamma <= r * 2 || gamma > one {
                return Err(Error::input(format!("gamma = {gamma} is not a power of 1/2 in (2r, 1] with r = {r}")));
            }
            let l = (one / (gamma - r * 2)).ceil().to_integer() as usize;
            let report = is_list_decodable(cstar, one - gamma, l, SearchMode::Exhaustive, cap)?;
            Ok(CenterCheck { gamma, list_bound: l, report })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureOutcome {
    pub subcode_size: usize,
    /// `min(cluster_size, ceil(D / alpha))`.
    pub target: usize,
    /// First center whose target set landed entirely in the subcode.
    pub center: Option<usize>,
    /// Distinct subcode words within distance 1 of that center.
    pub certified_list_size: usize,
}

impl CaptureOutcome {
    pub fn captured(&self) -> bool {
        self.center.is_some()
    }
}

/// One subcode draw at `p = q^(-alpha n) / n` (with replacement); reports
/// whether it contains the first `target` members of some cluster.
pub fn cluster_capture_trial(cc: &ClusterCode, alpha: f64, seed: u64) -> Result<CaptureOutcome> {
    if !(alpha > 0.0) {
        return Err(Error::input("alpha must be positive"));
    }
    let params = &cc.params;
    let n = params.n;
    let p = (params.q as f64).powf(-alpha * n as f64) / n as f64;
    let (_, draw) = draw_subcode(&cc.c0, SizeSpec::Fraction(p), Replacement::With, seed)?;
    let d = to_f64(params.d);
    let target = ((d / alpha).ceil().to_usize().unwrap_or(usize::MAX)).clamp(1, params.cluster_size);
    let mut present = vec![false; cc.c0.len()];
    for &i in &draw.indices {
        present[i] = true;
    }
    let center = (0..cc.centers.len()).find(|&z| cc.cluster(z).take(target).all(|col| present[col]));
    let certified_list_size = match center {
        Some(z) => {
            let zc = cc.centers.codeword(z);
            let mut close: Vec<usize> =
                draw.indices.iter().copied().filter(|&i| dist(cc.c0.codeword(i), zc) <= 1).collect();
            close.sort_unstable();
            close.dedup();
            close.len()
        }
        None => 0,
    };
    Ok(CaptureOutcome { subcode_size: draw.size, target, center, certified_list_size })
}
