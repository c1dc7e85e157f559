//! Cohomology of split vector bundles on the projective line.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("a splitting type needs at least one summand")]
    Empty,
    #[error("wedge square needs rank at least 2, got {0}")]
    Rank(usize),
}

/// Degrees `(d_1, .., d_r)` of `O(d_1) + .. + O(d_r)`, kept sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplittingType(Vec<i64>);

impl SplittingType {
    pub fn new(mut degrees: Vec<i64>) -> Result<Self, BundleError> {
        if degrees.is_empty() {
            return Err(BundleError::Empty);
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplittingType(degrees))
    }

    pub fn degrees(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

/// `(h^0, h^1)`.
pub fn cohomology_dims(s: &SplittingType) -> (u64, u64) {
    let h0 = s.0.iter().map(|&d| (d + 1).max(0) as u64).sum();
    let h1 = s.0.iter().map(|&d| (-d - 1).max(0) as u64).sum();
    (h0, h1)
}

pub fn wedge2(s: &SplittingType) -> Result<SplittingType, BundleError> {
    if s.rank() < 2 {
        return Err(BundleError::Rank(s.rank()));
    }
    let d = &s.0;
    let mut out = Vec::with_capacity(d.len() * (d.len() - 1) / 2);
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            out.push(d[i] + d[j]);
        }
    }
    SplittingType::new(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresentationCounts {
    pub generators: u64,
    pub relations: u64,
    pub quadratic_relations: u64,
}

/// Generators `h^0(N)`, relations `h^0(wedge^2 N)`, and the image of
/// `wedge^2 H^0(N)` computed summand by summand.
pub fn expected_presentation_counts(s: &SplittingType) -> PresentationCounts {
    let generators = cohomology_dims(s).0;
    let relations = wedge2(s).map(|w| cohomology_dims(&w).0).unwrap_or(0);
    let d = &s.0;
    let mut quadratic = 0;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i] >= 0 && d[j] >= 0 {
                quadratic += (d[i] + d[j] + 1) as u64;
            }
        }
    }
    PresentationCounts { generators, relations, quadratic_relations: quadratic }
}

/// Normal bundle type `O(1) + O^k + O(-1)^3` of the reduced fiber, with
/// `k = 1, 3, 4, 5, 5` for lengths 2..6.
pub fn normal_bundle_for_length(l: u32) -> Option<SplittingType> {
    let zeros = match l {
        2 => 1,
        3..=5 => l,
        6 => 5,
        _ => return None,
    };
    let mut d = vec![1];
    d.extend(std::iter::repeat_n(0, zeros as usize));
    d.extend([-1, -1, -1]);
    SplittingType::new(d).ok()
}
