//! Shared generators for the integration suites: random lattice simplices drawn from
//! realizable edge-profile families. Not every binary uses every helper.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simplex_cover::lattice::{EdgeLengthMatrix, LatticeSimplex, LatticeVector};
use simplex_cover::strategy::realize_edge_profile;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Nonzero vector with coordinates in `[lo, hi]`, divided by its content.
pub fn primitive_vector(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> LatticeVector {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.random_range(lo..=hi)).collect();
        if v.iter().all(|&c| c == 0) {
            continue;
        }
        let lv = LatticeVector::from_i64(&v);
        let content = lv.content();
        return LatticeVector::new(lv.coords().iter().map(|c| c / &content).collect());
    }
}

fn entries_within(profile: &EdgeLengthMatrix, lo: i64, hi: i64) -> bool {
    let m = profile.order();
    (0..m).all(|i| {
        (0..m)
            .filter(|&j| j != i)
            .all(|j| *profile.get(i, j) >= bi(lo) && *profile.get(i, j) <= bi(hi))
    })
}

/// Bound on the normalized volume, to keep closure checks within budget.
fn small_volume(p: &LatticeSimplex, max_normalized: i64) -> bool {
    p.normalized_volume() <= bi(max_normalized)
}

/// Edge profile of `scale` times a random small simplex (always realizable).
fn scaled_profile(rng: &mut ChaCha8Rng, dim: usize, scale: i64) -> Option<EdgeLengthMatrix> {
    let mut vertices = vec![LatticeVector::zero(dim)];
    for _ in 0..dim {
        vertices.push(LatticeVector::from_i64(
            &(0..dim)
                .map(|_| rng.random_range(-2i64..=2))
                .collect::<Vec<_>>(),
        ));
    }
    let s = LatticeSimplex::new(vertices).ok()?.dilated(&bi(scale));
    Some(s.edge_length_matrix())
}

/// Edge profile with two length-3 edges and one odd edge at vertex 0 (the profile
/// family whose apex coefficients go negative at modulus 2), built from an explicit
/// witness simplex so it is guaranteed realizable.
fn three_three_odd_profile(rng: &mut ChaCha8Rng) -> Option<EdgeLengthMatrix> {
    let a = primitive_vector(rng, 3, -2, 2);
    let step = |rng: &mut ChaCha8Rng, base: &LatticeVector| -> LatticeVector {
        let shift: Vec<i64> = (0..3).map(|_| 2 * rng.random_range(-1i64..=1)).collect();
        base.add(&LatticeVector::from_i64(&shift))
    };
    let b = step(rng, &a);
    let c = step(rng, &a);
    if b.content() != bi(1) || c.content() != bi(1) {
        return None;
    }
    let l03 = [3i64, 5, 7, 9, 11][rng.random_range(0..5)];
    let vertices = vec![
        LatticeVector::zero(3),
        a.scaled(&bi(3)),
        b.scaled(&bi(3)),
        c.scaled(&bi(l03)),
    ];
    let s = LatticeSimplex::new(vertices).ok()?;
    Some(s.edge_length_matrix())
}

/// Random dimension-3 simplex with every edge length in [2, 12], produced through
/// `realize_edge_profile` over a mix of profile families.
pub fn dim3_realized_simplex(rng: &mut ChaCha8Rng, max_volume: i64) -> LatticeSimplex {
    loop {
        let target = match rng.random_range(0u8..4) {
            0 | 1 => {
                let scale = rng.random_range(2i64..=6);
                scaled_profile(rng, 3, scale)
            }
            _ => three_three_odd_profile(rng),
        };
        let Some(target) = target else { continue };
        if !entries_within(&target, 2, 12) {
            continue;
        }
        let seed = rng.random::<u64>();
        if let Some(p) = realize_edge_profile(&target, 30_000, seed) {
            if small_volume(&p, max_volume) {
                return p;
            }
        }
    }
}

/// Vector congruent to `residue` mod 3 componentwise, primitive, nonzero.
fn residue_class_primitive(rng: &mut ChaCha8Rng, residue: &[i64]) -> Option<LatticeVector> {
    let v: Vec<i64> = residue
        .iter()
        .map(|&r| r + 3 * rng.random_range(-1i64..=1))
        .collect();
    if v.iter().all(|&c| c == 0) {
        return None;
    }
    let lv = LatticeVector::from_i64(&v);
    (lv.content() == bi(1)).then_some(lv)
}

/// Random dimension-4 simplex with `l(P) >= 3` and no edge of length 5, drawn from
/// four structural families, cycling by `family % 4`:
/// 0: three times a small simplex (all coefficients nonnegative at modulus 3);
/// 1: four times a small simplex (every edge divisible by 4);
/// 2: three edges of length 4 or 8 and one of length 7 at vertex 0;
/// 3: two edges of length 4 or 8, one of length 11, one of length 7 at vertex 0.
pub fn dim4_family_simplex(rng: &mut ChaCha8Rng, family: usize) -> LatticeSimplex {
    let five = bi(5);
    'outer: loop {
        let candidate = match family % 4 {
            0 | 1 => {
                let scale = if family.is_multiple_of(4) { 3 } else { 4 };
                let mut vertices = vec![LatticeVector::zero(4)];
                for _ in 0..4 {
                    vertices.push(LatticeVector::from_i64(
                        &(0..4)
                            .map(|_| rng.random_range(-2i64..=2))
                            .collect::<Vec<_>>(),
                    ));
                }
                match LatticeSimplex::new(vertices) {
                    Ok(s) => s.dilated(&bi(scale)),
                    Err(_) => continue 'outer,
                }
            }
            both @ (2 | 3) => {
                let (rho, long3): (Vec<i64>, Option<LatticeVector>) = if both == 2 {
                    let rho: Vec<i64> = (0..4).map(|_| rng.random_range(0i64..3)).collect();
                    (rho, None)
                } else {
                    let c = primitive_vector(rng, 4, -2, 2);
                    let rho: Vec<i64> = c
                        .coords()
                        .iter()
                        .map(|x| {
                            use num_traits::ToPrimitive;
                            (x.to_i64().unwrap() * 2).rem_euclid(3)
                        })
                        .collect();
                    (rho, Some(c))
                };
                // A short edge has length 4 (primitive direction congruent to rho mod
                // 3) or 8 (primitive direction congruent to 2*rho, so that twice it is
                // back in the class of the others).
                let two_rho: Vec<i64> = rho.iter().map(|&r| (2 * r) % 3).collect();
                let short = |rng: &mut ChaCha8Rng| -> Option<LatticeVector> {
                    if rng.random_bool(0.3) {
                        residue_class_primitive(rng, &two_rho).map(|v| v.scaled(&bi(8)))
                    } else {
                        residue_class_primitive(rng, &rho).map(|v| v.scaled(&bi(4)))
                    }
                };
                let Some(u1) = short(rng) else {
                    continue 'outer;
                };
                let Some(u2) = short(rng) else {
                    continue 'outer;
                };
                let third = match &long3 {
                    Some(c) => c.scaled(&bi(11)),
                    None => match short(rng) {
                        Some(v) => v,
                        None => continue 'outer,
                    },
                };
                let Some(d) = residue_class_primitive(rng, &rho) else {
                    continue 'outer;
                };
                let vertices = vec![LatticeVector::zero(4), u1, u2, third, d.scaled(&bi(7))];
                match LatticeSimplex::new(vertices) {
                    Ok(s) => s,
                    Err(_) => continue 'outer,
                }
            }
            _ => unreachable!(),
        };
        let lengths = candidate.edge_length_matrix();
        if lengths.min_length() < bi(3) {
            continue;
        }
        for i in 0..5 {
            for j in (i + 1)..5 {
                if lengths.get(i, j) == &five {
                    continue 'outer;
                }
            }
        }
        return candidate;
    }
}

/// Random simplex-interior barycentric coordinates with small rational entries.
pub fn random_barycentric(
    rng: &mut ChaCha8Rng,
    order: usize,
) -> simplex_cover::lattice::BarycentricCoords {
    use num_rational::BigRational;
    loop {
        let nums: Vec<u64> = (0..order).map(|_| rng.random_range(0..=1000)).collect();
        let total: u64 = nums.iter().sum();
        if total == 0 {
            continue;
        }
        return simplex_cover::lattice::BarycentricCoords::new(
            nums.iter()
                .map(|&n| BigRational::new(bi(n as i64), bi(total as i64)))
                .collect(),
        )
        .unwrap();
    }
}
