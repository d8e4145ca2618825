//! Brute-force verification of integral closedness at small scale: checks
//! `(P cap M) + (rP cap M) = (r+1)P cap M` for `r` up to a bound by direct pairwise
//! addition of lattice points.
//!
//! A simplex covered by dilations `kQ` with `k >= dim - 1` is integrally closed, so
//! `covered_implies_closed_check` turns that statement into an executable cross-check:
//! any failure on a certified cover is reported as a loud contradiction, never ignored.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSimplex, LatticeVector};
use crate::strategy::StrategyReport;

/// Budgets for the enumeration work.
#[derive(Debug, Clone, Copy)]
pub struct ClosureBudget {
    /// Cap on the lattice-point count of any single dilate `rP`.
    pub max_points_per_dilate: usize,
    /// Candidate-cell cap handed to the lattice-point enumerator.
    pub max_cells: u64,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget {
            max_points_per_dilate: 200_000,
            max_cells: crate::lattice::DEFAULT_CELL_CAP,
        }
    }
}

/// A lattice point of `(r+1)P` that is not a sum of a point of `P` and a point of `rP`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureFailure {
    pub r: u32,
    pub point: LatticeVector,
}

#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub r_max: u32,
    pub failures: Vec<ClosureFailure>,
    /// `counts[r - 1]` is the lattice-point count of `rP`, for `r = 1 ..= r_max + 1`.
    pub counts: Vec<usize>,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the sumset equality for every `1 <= r <= r_max`.
pub fn is_integrally_closed_up_to(
    parent: &LatticeSimplex,
    r_max: u32,
    budget: &ClosureBudget,
) -> Result<ClosureReport> {
    assert!(r_max >= 1, "r_max must be at least 1");
    let mut dilates: Vec<Vec<LatticeVector>> = Vec::with_capacity(r_max as usize + 1);
    for r in 1..=(r_max + 1) {
        let points = parent
            .dilated(&BigInt::from(r))
            .lattice_points(budget.max_cells)?;
        if points.len() > budget.max_points_per_dilate {
            return Err(Error::ClosureBudget {
                points: points.len(),
                cap: budget.max_points_per_dilate,
            });
        }
        dilates.push(points);
    }
    let counts: Vec<usize> = dilates.iter().map(Vec::len).collect();

    let mut failures = Vec::new();
    for r in 1..=r_max {
        let missing = sumset_missing(&dilates[0], &dilates[r as usize - 1], &dilates[r as usize])?;
        failures.extend(missing.into_iter().map(|point| ClosureFailure { r, point }));
    }
    Ok(ClosureReport {
        r_max,
        failures,
        counts,
    })
}

/// Points of `target` not expressible as `a + b` with `a` in `left`, `b` in `right`.
/// Also verifies the unconditional inclusion `left + right` inside `target`.
fn sumset_missing(
    left: &[LatticeVector],
    right: &[LatticeVector],
    target: &[LatticeVector],
) -> Result<Vec<LatticeVector>> {
    if let (Some(l), Some(r), Some(t)) = (
        to_i64_points(left),
        to_i64_points(right),
        to_i64_points(target),
    ) {
        return sumset_missing_i64(&l, &r, &t, target);
    }
    // Arbitrary-precision fallback.
    let target_set: std::collections::HashSet<&LatticeVector> = target.iter().collect();
    let mut hit = std::collections::HashSet::new();
    for a in left {
        for b in right {
            let s = a.add(b);
            assert!(
                target_set.contains(&s),
                "sumset point {s} escapes the dilated simplex"
            );
            hit.insert(s);
        }
    }
    Ok(target
        .iter()
        .filter(|p| !hit.contains(*p))
        .cloned()
        .collect())
}

fn to_i64_points(points: &[LatticeVector]) -> Option<Vec<Vec<i64>>> {
    points
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .map(|c| c.to_i64().filter(|v| v.abs() < i64::MAX / 4))
                .collect::<Option<Vec<i64>>>()
        })
        .collect()
}

/// Fast path: marks sums in a bitset indexed by the target's bounding box.
fn sumset_missing_i64(
    left: &[Vec<i64>],
    right: &[Vec<i64>],
    target: &[Vec<i64>],
    target_big: &[LatticeVector],
) -> Result<Vec<LatticeVector>> {
    let dim = target.first().map_or(0, Vec::len);
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for p in target {
        for (c, &x) in p.iter().enumerate() {
            lo[c] = lo[c].min(x);
            hi[c] = hi[c].max(x);
        }
    }
    let extents: Vec<u64> = (0..dim).map(|c| (hi[c] - lo[c] + 1) as u64).collect();
    let volume = extents
        .iter()
        .try_fold(1u64, |acc, &e| acc.checked_mul(e).filter(|&v| v <= 1 << 33));
    let volume = match volume {
        Some(v) => v,
        None => {
            // Box too large for a bitset; fall back to hashing.
            let target_set: std::collections::HashSet<&Vec<i64>> = target.iter().collect();
            let mut hit = std::collections::HashSet::new();
            for a in left {
                for b in right {
                    let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    assert!(target_set.contains(&s), "sumset point escapes the dilate");
                    hit.insert(s);
                }
            }
            return Ok(target
                .iter()
                .zip(target_big)
                .filter(|(p, _)| !hit.contains(*p))
                .map(|(_, big)| big.clone())
                .collect());
        }
    };

    let index = |p: &[i64]| -> Option<usize> {
        let mut idx: u64 = 0;
        for c in 0..dim {
            if p[c] < lo[c] || p[c] > hi[c] {
                return None;
            }
            idx = idx * extents[c] + (p[c] - lo[c]) as u64;
        }
        Some(idx as usize)
    };

    let words = (volume as usize).div_ceil(64);
    let mut in_target = vec![0u64; words];
    for p in target {
        let idx = index(p).expect("target point indexes its own box");
        in_target[idx / 64] |= 1 << (idx % 64);
    }
    let mut covered = vec![0u64; words];
    let mut sum = vec![0i64; dim];
    for a in left {
        for b in right {
            for c in 0..dim {
                sum[c] = a[c] + b[c];
            }
            let idx = index(&sum).expect("sum stays inside the dilated simplex");
            assert!(
                in_target[idx / 64] & (1 << (idx % 64)) != 0,
                "sumset point escapes the dilated simplex"
            );
            covered[idx / 64] |= 1 << (idx % 64);
        }
    }
    Ok(target
        .iter()
        .zip(target_big)
        .filter(|(p, _)| {
            let idx = index(p).expect("target point indexes its own box");
            covered[idx / 64] & (1 << (idx % 64)) == 0
        })
        .map(|(_, big)| big.clone())
        .collect())
}

/// Cross-check on a certified cover with all moduli at least `dim - 1`: the parent must
/// be integrally closed up to `r_max`. A failure is a contradiction and aborts loudly.
pub fn covered_implies_closed_check(
    report: &StrategyReport,
    r_max: u32,
    budget: &ClosureBudget,
) -> Result<ClosureReport> {
    assert!(
        report.certificate.is_covered(),
        "cross-check requires a covered certificate"
    );
    let parent = report.cover.parent();
    let min_modulus = report.cover.min_modulus();
    assert!(
        min_modulus as usize >= parent.dim() - 1,
        "cross-check requires moduli >= dim - 1"
    );
    let closure = is_integrally_closed_up_to(parent, r_max, budget)?;
    if let Some(failure) = closure.failures.first() {
        return Err(Error::ClosureContradiction {
            r: failure.r,
            point: failure.point.to_string(),
        });
    }
    Ok(closure)
}
