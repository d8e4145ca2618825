//! Constructive covering strategies.
//!
//! Dimension 3 (lattice length at least 2): either every `A_i` at modulus 2 is
//! nonnegative and the four apex 2-dilations cover, or the negative vertex has at least
//! two incident edges of length 3 and all incident lengths odd, and a mix of apex 3-
//! and 2-dilations covers. Dimension 4 (lattice length at least 3, no edge of length
//! 5): the analogous split at modulus 3 with three special cases. Every constructed
//! cover is certified exactly rather than trusted; a certification failure is a loud
//! error, never a silent fallback.
//!
//! For simplices outside those hypotheses (notably dimension 4 with an edge of lattice
//! length 5), a witness-guided search looks for supplementary dilations: each uncovered
//! witness is fed to an exact membership LP over the lattice points of one residue
//! class mod `k`, whose basic solution is a `k`-dilation containing the witness.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coverage::{a_coefficients, certify, ACoefficients, CertStatus, Certificate, Cover};
use crate::dilation::Dilation;
use crate::error::{Error, Result};
use crate::lattice::{
    affine_rank, BarycentricCoords, EdgeLengthMatrix, LatticeSimplex, LatticeVector, RationalPoint,
    DEFAULT_CELL_CAP,
};
use crate::lp::{self, Constraint, LpOutcome, LpProblem, Relation};

/// Which construction produced a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseTag {
    /// All `A_i >= 0` at modulus `k`: the apex dilations alone cover.
    AllNonNegative { k: u32 },
    /// Dimension-3 special case; `relabeling[m]` is the original index of relabeled
    /// vertex `m` (the negative vertex first, its two length-3 neighbors next).
    Dim3Special { relabeling: Vec<usize> },
    /// Every edge length divisible by 4: the simplex is itself a 4-dilation.
    CaseA,
    /// Dimension 4 with three edges of length 4 or 8 at the negative vertex;
    /// `apex_set` holds the original indices used as apexes at modulus 4.
    CaseB { apex_set: Vec<usize> },
    /// Dimension 4 with exactly two edges of length 4 or 8 at the negative vertex.
    CaseC { relabeling: Vec<usize> },
    /// Witness-guided search succeeded after the given number of rounds.
    SupplementarySearch { rounds: usize },
    /// No certified cover within budget; the certificate carries the last witness.
    Unsupported { reason: String },
}

#[derive(Debug, Clone)]
pub struct StrategyReport {
    pub case_tag: CaseTag,
    pub cover: Cover,
    pub certificate: Certificate,
    pub a_table: ACoefficients,
}

impl StrategyReport {
    pub fn is_covered(&self) -> bool {
        self.certificate.is_covered()
    }
}

/// Budgets for the witness-guided search.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub max_rounds: usize,
    pub max_candidates_per_round: usize,
    pub residue_class_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_rounds: 32,
            max_candidates_per_round: 1200,
            residue_class_cap: 256,
        }
    }
}

/// Certifies a constructed cover and enforces the construction contract: the
/// strategies are backed by proofs, so an uncovered result is an internal error
/// carrying the witness.
fn certified_report(tag: CaseTag, cover: Cover, a_table: ACoefficients) -> Result<StrategyReport> {
    let certificate = certify(&cover)?;
    match &certificate.status {
        CertStatus::Covered => Ok(StrategyReport {
            case_tag: tag,
            cover,
            certificate,
            a_table,
        }),
        CertStatus::Witness { lambda, .. } => Err(Error::CertificationFailed {
            witness: lambda.to_string(),
        }),
    }
}

/// Rebuilds dilations constructed on a relabeled simplex against the original one.
/// `perm[m]` is the original index of relabeled vertex `m`; vertex coordinates are
/// unchanged, only apex indices and translation indexing move.
fn map_cover_back(
    original: &LatticeSimplex,
    perm: &[usize],
    relabeled: Vec<Dilation>,
) -> Result<Vec<Dilation>> {
    use crate::dilation::DilationSpec;
    let n = original.dim();
    let mut out = Vec::with_capacity(relabeled.len());
    for d in relabeled {
        let mapped = match d.spec() {
            DilationSpec::Apex {
                apex,
                modulus,
                translation,
            } => {
                let orig_apex = perm[*apex];
                let mut t_full = vec![BigInt::zero(); n + 1];
                for (m, t) in translation.iter().enumerate() {
                    t_full[perm[m]] = t.clone();
                }
                let t: Vec<BigInt> = (0..=n)
                    .filter(|&j| j != orig_apex)
                    .map(|j| t_full[j].clone())
                    .collect();
                Dilation::translated(original, orig_apex, *modulus, &t)?
            }
            DilationSpec::Explicit { modulus } => {
                Dilation::explicit(original, *modulus, d.vertices().to_vec())?
            }
        };
        // Relabeling permutes indices only; the point set must be identical.
        debug_assert_eq!(sorted(mapped.vertices()), sorted(d.vertices()));
        out.push(mapped);
    }
    Ok(out)
}

fn sorted(vertices: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut v = vertices.to_vec();
    v.sort();
    v
}

/// Covering strategy for dimension 3 with `l(P) >= 2`.
pub fn cover_dim3(parent: &LatticeSimplex) -> Result<StrategyReport> {
    if parent.dim() != 3 {
        return Err(Error::Hypothesis(format!(
            "cover_dim3 requires dimension 3, got {}",
            parent.dim()
        )));
    }
    let lengths = parent.edge_length_matrix();
    if lengths.min_length() < BigInt::from(2) {
        return Err(Error::Hypothesis(
            "dimension 3 requires lattice length at least 2".into(),
        ));
    }

    let a_table = a_coefficients(parent, 2)?;
    if a_table.all_nonnegative() {
        let dilations: Result<Vec<Dilation>> =
            (0..4).map(|i| Dilation::apex(parent, i, 2)).collect();
        let cover = Cover::new(parent.clone(), dilations?)?;
        return certified_report(CaseTag::AllNonNegative { k: 2 }, cover, a_table);
    }

    let v = a_table.negative_indices()[0];
    // A_v < 0 at modulus 2 forces at least two incident edges of length 3 and all
    // incident lengths odd.
    let three = BigInt::from(3);
    let incident: Vec<(usize, BigInt)> = (0..4)
        .filter(|&j| j != v)
        .map(|j| (j, lengths.get(v, j).clone()))
        .collect();
    let odd = incident.iter().all(|(_, l)| l.is_odd());
    let threes = incident.iter().filter(|(_, l)| *l == three).count();
    if !odd || threes < 2 {
        return Err(Error::Classification(format!(
            "A_{v} < 0 but incident lengths {:?} are not (3, 3, odd)",
            incident
                .iter()
                .map(|(_, l)| l.to_string())
                .collect::<Vec<_>>()
        )));
    }

    // Relabel: v first; the neighbor with the largest length (smallest index on ties)
    // goes last; the two remaining length-3 neighbors keep index order.
    let far = incident
        .iter()
        .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        .expect("three neighbors")
        .0;
    let mut perm = vec![v];
    perm.extend(incident.iter().map(|(j, _)| *j).filter(|&j| j != far));
    perm.push(far);
    let relabeled = parent.relabeled(&perm)?;
    let rl = relabeled.edge_length_matrix();

    // Side condition from the construction: the two length-3 edges force 3 | l_12.
    if !rl.get(1, 2).mod_floor(&three).is_zero() {
        return Err(Error::Classification(format!(
            "expected 3 | l_12, got l_12 = {}",
            rl.get(1, 2)
        )));
    }

    let two = BigInt::from(2);
    let apex_set: Vec<usize> = (0..3).filter(|&i| rl.get(3, i) != &two).collect();
    if !apex_set.contains(&0) {
        return Err(Error::Classification(
            "vertex 0 must participate: l_30 is odd".into(),
        ));
    }
    let mut dilations = Vec::with_capacity(apex_set.len() + 1);
    for &i in &apex_set {
        dilations.push(Dilation::apex(&relabeled, i, 3)?);
    }
    dilations.push(Dilation::apex(&relabeled, 3, 2)?);
    let cover = Cover::new(parent.clone(), map_cover_back(parent, &perm, dilations)?)?;
    certified_report(CaseTag::Dim3Special { relabeling: perm }, cover, a_table)
}

/// Covering strategy for dimension 4 with `l(P) >= 3` and no edge of lattice length 5.
pub fn cover_dim4(parent: &LatticeSimplex) -> Result<StrategyReport> {
    if parent.dim() != 4 {
        return Err(Error::Hypothesis(format!(
            "cover_dim4 requires dimension 4, got {}",
            parent.dim()
        )));
    }
    let lengths = parent.edge_length_matrix();
    if lengths.min_length() < BigInt::from(3) {
        return Err(Error::Hypothesis(
            "dimension 4 requires lattice length at least 3".into(),
        ));
    }
    let five = BigInt::from(5);
    for i in 0..5 {
        for j in (i + 1)..5 {
            if lengths.get(i, j) == &five {
                return Err(Error::Hypothesis(format!(
                    "edge ({i},{j}) has lattice length 5"
                )));
            }
        }
    }

    let a_table = a_coefficients(parent, 3)?;
    if a_table.all_nonnegative() {
        let dilations: Result<Vec<Dilation>> =
            (0..5).map(|i| Dilation::apex(parent, i, 3)).collect();
        let cover = Cover::new(parent.clone(), dilations?)?;
        return certified_report(CaseTag::AllNonNegative { k: 3 }, cover, a_table);
    }

    let four = BigInt::from(4);
    // Case A: a vertex with every incident length divisible by 4 makes every edge
    // length divisible by 4, i.e. the simplex is itself a 4-dilation.
    let all_div4_vertex = (0..5).find(|&w| {
        lengths
            .incident(w)
            .iter()
            .all(|l| l.mod_floor(&four).is_zero())
    });
    if all_div4_vertex.is_some() {
        for i in 0..5 {
            for j in (i + 1)..5 {
                if !lengths.get(i, j).mod_floor(&four).is_zero() {
                    return Err(Error::Classification(format!(
                        "vertex with all incident lengths divisible by 4, yet 4 does \
                         not divide l_{i}{j} = {}",
                        lengths.get(i, j)
                    )));
                }
            }
        }
        let whole = Dilation::explicit(parent, 4, parent.vertices().to_vec())?;
        let cover = Cover::new(parent.clone(), vec![whole])?;
        return certified_report(CaseTag::CaseA, cover, a_table);
    }

    let v = a_table.negative_indices()[0];
    let eight = BigInt::from(8);
    let is_short = |l: &BigInt| l == &four || l == &eight;
    let fours: Vec<usize> = (0..5)
        .filter(|&j| j != v && is_short(lengths.get(v, j)))
        .collect();
    let others: Vec<usize> = (0..5)
        .filter(|&j| j != v && !is_short(lengths.get(v, j)))
        .collect();

    match fours.len() {
        3 => {
            // Case B: relabel v first, the three short edges next.
            let mut perm = vec![v];
            perm.extend(&fours);
            perm.extend(&others);
            let relabeled = parent.relabeled(&perm)?;
            let rl = relabeled.edge_length_matrix();
            for i in 1..4 {
                for j in (i + 1)..4 {
                    if !rl.get(i, j).mod_floor(&four).is_zero() {
                        return Err(Error::Classification(format!(
                            "case B requires 4 | l_{i}{j}, got {}",
                            rl.get(i, j)
                        )));
                    }
                }
            }
            if rl.get(0, 4).mod_floor(&BigInt::from(3)).is_zero() {
                return Err(Error::Classification(
                    "case B: A_0 < 0 forbids 3 | l_04".into(),
                ));
            }
            let three = BigInt::from(3);
            let apex_set: Vec<usize> = (0..4).filter(|&i| rl.get(i, 4) != &three).collect();
            let mut dilations = Vec::with_capacity(apex_set.len() + 1);
            for &i in &apex_set {
                dilations.push(Dilation::apex(&relabeled, i, 4)?);
            }
            dilations.push(Dilation::apex(&relabeled, 4, 3)?);
            let original_set: Vec<usize> = apex_set.iter().map(|&i| perm[i]).collect();
            let cover = Cover::new(parent.clone(), map_cover_back(parent, &perm, dilations)?)?;
            certified_report(
                CaseTag::CaseB {
                    apex_set: original_set,
                },
                cover,
                a_table,
            )
        }
        2 => {
            // Case C: relabel so the short edges are 1 and 2 and l_03 = 11.
            let eleven = BigInt::from(11);
            let (j3, j4) = if lengths.get(v, others[0]) == &eleven {
                (others[0], others[1])
            } else if lengths.get(v, others[1]) == &eleven {
                (others[1], others[0])
            } else {
                return Err(Error::Classification(format!(
                    "case C requires an edge of length 11 at vertex {v}, found {} and {}",
                    lengths.get(v, others[0]),
                    lengths.get(v, others[1])
                )));
            };
            let perm = vec![v, fours[0], fours[1], j3, j4];
            let relabeled = parent.relabeled(&perm)?;
            let rl = relabeled.edge_length_matrix();
            let l04 = rl.get(0, 4).clone();
            let admissible = [7i64, 11, 14, 17].map(BigInt::from);
            if !admissible.contains(&l04) {
                return Err(Error::Classification(format!(
                    "case C requires l_04 in {{7, 11, 14, 17}}, got {l04}"
                )));
            }
            if !rl.get(1, 2).mod_floor(&four).is_zero() {
                return Err(Error::Classification(format!(
                    "case C requires 4 | l_12, got {}",
                    rl.get(1, 2)
                )));
            }
            let mut dilations = Vec::with_capacity(8);
            for i in 0..5 {
                dilations.push(Dilation::apex(&relabeled, i, 3)?);
            }
            dilations.push(Dilation::apex(&relabeled, 0, 4)?);
            let t_last = [
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::one(),
            ];
            let t_third = [
                BigInt::zero(),
                BigInt::zero(),
                BigInt::one(),
                BigInt::zero(),
            ];
            dilations.push(Dilation::translated(&relabeled, 0, 3, &t_last)?);
            dilations.push(Dilation::translated(&relabeled, 0, 3, &t_third)?);
            let cover = Cover::new(parent.clone(), map_cover_back(parent, &perm, dilations)?)?;
            certified_report(CaseTag::CaseC { relabeling: perm }, cover, a_table)
        }
        m => Err(Error::Classification(format!(
            "A_{v} < 0 with {m} incident edges of length 4 or 8; expected 2 or 3"
        ))),
    }
}

/// Entry point choosing a strategy by dimension; dimension-4 simplices with an edge of
/// lattice length 5 are routed to the witness-guided search (best effort).
pub fn cover_simplex(parent: &LatticeSimplex, budget: &SearchBudget) -> Result<StrategyReport> {
    match parent.dim() {
        3 => cover_dim3(parent),
        4 => {
            let lengths = parent.edge_length_matrix();
            if lengths.min_length() < BigInt::from(3) {
                return Err(Error::Hypothesis(
                    "dimension 4 requires lattice length at least 3".into(),
                ));
            }
            let five = BigInt::from(5);
            let has_five = (0..5).any(|i| ((i + 1)..5).any(|j| lengths.get(i, j) == &five));
            if has_five {
                let dilations: Result<Vec<Dilation>> =
                    (0..5).map(|i| Dilation::apex(parent, i, 3)).collect();
                let base = Cover::new(parent.clone(), dilations?)?;
                search_supplementary(parent, 3, base, budget)
            } else {
                cover_dim4(parent)
            }
        }
        d => Err(Error::Hypothesis(format!(
            "covering strategies exist for dimensions 3 and 4, got {d}"
        ))),
    }
}

/// Witness-guided search for supplementary `k`-dilations on top of `base`.
///
/// Each round certifies the current cover; a witness is looked up in the lattice
/// points of the parent, bucketed by residue class mod `k` (classes nearest the
/// witness first). An exact LP decides whether the witness lies in the convex hull of
/// a class; its basic solution is a set of at most `n + 1` affinely independent class
/// points whose hull contains the witness, extended to full dimension and added to the
/// cover. Deterministic throughout: fixed class order, fixed candidate order, Bland
/// pivoting.
pub fn search_supplementary(
    parent: &LatticeSimplex,
    k: u32,
    base: Cover,
    budget: &SearchBudget,
) -> Result<StrategyReport> {
    if base.parent() != parent {
        return Err(Error::ParentMismatch);
    }
    let a_table = a_coefficients(parent, k)?;
    let mut points: Option<Vec<LatticeVector>> = None;
    let mut cover = base;
    let mut rounds = 0usize;
    loop {
        let certificate = certify(&cover)?;
        match &certificate.status {
            CertStatus::Covered => {
                return Ok(StrategyReport {
                    case_tag: CaseTag::SupplementarySearch { rounds },
                    cover,
                    certificate,
                    a_table,
                });
            }
            CertStatus::Witness { lambda, .. } => {
                if rounds >= budget.max_rounds {
                    return Ok(StrategyReport {
                        case_tag: CaseTag::Unsupported {
                            reason: format!("search budget exhausted after {rounds} rounds"),
                        },
                        cover,
                        certificate,
                        a_table,
                    });
                }
                rounds += 1;
                let points = match &points {
                    Some(p) => p,
                    None => points.insert(parent.lattice_points(DEFAULT_CELL_CAP)?),
                };
                match containing_dilation(parent, k, lambda, points, budget)? {
                    Some(d) => cover.push(d)?,
                    None => {
                        return Ok(StrategyReport {
                            case_tag: CaseTag::Unsupported {
                                reason: "no residue class yields a dilation containing \
                                         the witness"
                                    .into(),
                            },
                            cover,
                            certificate,
                            a_table,
                        });
                    }
                }
            }
        }
    }
}

/// Finds a `k`-dilation inside the parent containing the witness, or `None` when every
/// residue class fails.
fn containing_dilation(
    parent: &LatticeSimplex,
    k: u32,
    witness: &BarycentricCoords,
    points: &[LatticeVector],
    budget: &SearchBudget,
) -> Result<Option<Dilation>> {
    let n = parent.dim();
    let w = parent.from_barycentric(witness);
    let kk = BigInt::from(k);

    // Bucket lattice points by residue class mod k.
    let mut classes: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (idx, p) in points.iter().enumerate() {
        let class: Vec<u32> = p
            .coords()
            .iter()
            .map(|c| c.mod_floor(&kk).to_u32().expect("residue fits in u32"))
            .collect();
        classes.entry(class).or_default().push(idx);
    }

    // Order classes by the L1 distance from the witness to the nearest class point of
    // the infinite grid (not restricted to the parent), then lexicographically.
    let mut ordered: Vec<(BigRational, Vec<u32>)> = classes
        .keys()
        .map(|class| {
            let mut dist = BigRational::zero();
            for (c, &rho) in w.coords().iter().zip(class) {
                let offset = c - BigRational::from_integer(BigInt::from(rho));
                let steps = (&offset / BigRational::from_integer(kk.clone())).floor();
                let d = offset - steps * BigRational::from_integer(kk.clone());
                let other = BigRational::from_integer(kk.clone()) - &d;
                dist += d.min(other);
            }
            (dist, class.clone())
        })
        .collect();
    ordered.sort();

    for (_, class) in ordered.into_iter().take(budget.residue_class_cap) {
        let mut candidates: Vec<&LatticeVector> =
            classes[&class].iter().map(|&i| &points[i]).collect();
        if candidates.len() < n + 1 {
            continue;
        }
        // Far candidates first: the LP then prefers large simplices around the witness.
        let mut with_dist: Vec<(BigRational, &LatticeVector)> = candidates
            .drain(..)
            .map(|p| (l1_distance(p, &w), p))
            .collect();
        with_dist.sort_by(|(da, pa), (db, pb)| db.cmp(da).then_with(|| pa.cmp(pb)));
        with_dist.truncate(budget.max_candidates_per_round);

        if let Some(dilation) = hull_dilation(parent, k, &w, &with_dist)? {
            return Ok(Some(dilation));
        }
    }
    Ok(None)
}

fn l1_distance(p: &LatticeVector, w: &RationalPoint) -> BigRational {
    p.coords()
        .iter()
        .zip(w.coords())
        .map(|(a, b)| (BigRational::from_integer(a.clone()) - b).abs())
        .sum()
}

/// Membership LP over one residue class: is the witness a convex combination of the
/// candidates? On success the basic solution's support is extended to `n + 1` affinely
/// independent vertices and returned as an explicit dilation.
fn hull_dilation(
    parent: &LatticeSimplex,
    k: u32,
    w: &RationalPoint,
    candidates: &[(BigRational, &LatticeVector)],
) -> Result<Option<Dilation>> {
    let n = parent.dim();
    let nv = candidates.len();
    let mut constraints = Vec::with_capacity(n + 1);
    for c in 0..n {
        constraints.push(Constraint {
            coeffs: candidates
                .iter()
                .map(|(_, p)| BigRational::from_integer(p.coords()[c].clone()))
                .collect(),
            relation: Relation::Eq,
            rhs: w.coords()[c].clone(),
        });
    }
    constraints.push(Constraint {
        coeffs: vec![BigRational::one(); nv],
        relation: Relation::Eq,
        rhs: BigRational::one(),
    });
    let objective: Vec<BigRational> = candidates.iter().map(|(d, _)| d.clone()).collect();
    let problem = LpProblem::new(objective, constraints);
    let point = match lp::solve(&problem) {
        LpOutcome::Optimal { point, .. } => point,
        LpOutcome::Infeasible => return Ok(None),
        LpOutcome::Unbounded => unreachable!("weights live in the standard simplex"),
    };

    let mut verts: Vec<LatticeVector> = point
        .iter()
        .zip(candidates)
        .filter(|(mu, _)| mu.is_positive())
        .map(|(_, (_, p))| (*p).clone())
        .collect();
    // Extend the support to a full-dimensional vertex set.
    let mut rank = affine_rank(&verts);
    for (_, p) in candidates {
        if verts.len() == n + 1 {
            break;
        }
        if verts.contains(*p) {
            continue;
        }
        verts.push((*p).clone());
        let new_rank = affine_rank(&verts);
        if new_rank > rank {
            rank = new_rank;
        } else {
            verts.pop();
        }
    }
    if verts.len() != n + 1 || rank != n {
        return Ok(None);
    }
    verts.sort();
    Ok(Some(Dilation::explicit(parent, k, verts)?))
}

/// Randomized realization of an edge-length profile: `u_0 = 0`, `u_i = l_0i d_i` for
/// random primitive directions `d_i` with coordinates in `[-3, 3]`, accepted when the
/// resulting edge matrix equals the profile. Deterministic given the seed; `None` when
/// no realization is found within `trials` (the profile may be unrealizable).
pub fn realize_edge_profile(
    profile: &EdgeLengthMatrix,
    trials: u64,
    seed: u64,
) -> Option<LatticeSimplex> {
    let dim = profile.order() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'trial: for _ in 0..trials {
        let mut vertices = vec![LatticeVector::zero(dim)];
        for i in 1..=dim {
            let mut coords: Vec<BigInt>;
            loop {
                coords = (0..dim)
                    .map(|_| BigInt::from(rng.random_range(-3i64..=3)))
                    .collect();
                if coords.iter().any(|c| !c.is_zero()) {
                    break;
                }
            }
            let dir = LatticeVector::new(coords);
            let content = dir.content();
            let primitive = LatticeVector::new(dir.coords().iter().map(|c| c / &content).collect());
            vertices.push(primitive.scaled(profile.get(0, i)));
        }
        let simplex = match LatticeSimplex::new(vertices) {
            Ok(s) => s,
            Err(_) => continue 'trial,
        };
        if simplex.edge_length_matrix() == *profile {
            return Some(simplex);
        }
    }
    None
}
