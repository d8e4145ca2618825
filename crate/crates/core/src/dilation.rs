//! Apex dilations, their lattice translations, and explicit dilations of a lattice
//! simplex, together with the strict-inequality conditions for a point to lie outside
//! each of them.
//!
//! For an apex `u_i` and a modulus `k` with `2 <= k <= min_j l_ij`, the apex dilation
//! keeps `u_i` and moves every other vertex to the point at lattice distance
//! `l_ij - (l_ij mod k)` from `u_i` along the edge toward `u_j`. Every pairwise vertex
//! difference of the result is divisible by `k`, so the dilation is `kQ + v` for some
//! lattice simplex `Q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{affine_rank, BarycentricCoords, LatticeSimplex, LatticeVector};
use crate::lp;

/// Least nonnegative residue of `l` modulo `k`.
pub fn residue(l: &BigInt, k: u32) -> u32 {
    l.mod_floor(&BigInt::from(k))
        .to_u32()
        .expect("residue fits in u32")
}

/// The fraction `r / (l - r)` with `r = l mod k`; requires `l >= k` so the denominator
/// is positive.
pub fn residue_fraction(l: &BigInt, k: u32) -> BigRational {
    let r = BigInt::from(residue(l, k));
    let denom = l - &r;
    debug_assert!(denom.is_positive());
    BigRational::new(r, denom)
}

/// A strict linear condition `coeffs . lambda < rhs` on barycentric coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictInequality {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
}

impl StrictInequality {
    pub fn eval(&self, lambda: &[BigRational]) -> BigRational {
        self.coeffs.iter().zip(lambda).map(|(a, l)| a * l).sum()
    }

    /// True iff the strict inequality holds at `lambda`.
    pub fn holds_at(&self, lambda: &[BigRational]) -> bool {
        self.eval(lambda) < self.rhs
    }

    /// Scales so that the first nonzero coefficient has absolute value one; the solution
    /// set is unchanged. Useful for comparing conditions structurally.
    pub fn normalized(&self) -> StrictInequality {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lead) => {
                let scale = lead.abs();
                StrictInequality {
                    coeffs: self.coeffs.iter().map(|c| c / &scale).collect(),
                    rhs: &self.rhs / &scale,
                }
            }
        }
    }
}

impl fmt::Display for StrictInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                write!(f, "{c}*L{i}")?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}*L{i}", -c)?;
            } else {
                write!(f, " + {c}*L{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " < {}", self.rhs)
    }
}

/// Condition for a point of the parent simplex to lie *outside* a dilation: a
/// disjunction of strict inequalities, or `Never` when the dilation covers the whole
/// parent (every branch was unsatisfiable over the simplex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonMembershipCondition {
    Never,
    AnyOf(Vec<StrictInequality>),
}

impl NonMembershipCondition {
    pub fn branches(&self) -> &[StrictInequality] {
        match self {
            NonMembershipCondition::Never => &[],
            NonMembershipCondition::AnyOf(b) => b,
        }
    }

    pub fn holds_at(&self, lambda: &BarycentricCoords) -> bool {
        self.branches()
            .iter()
            .any(|b| b.holds_at(lambda.as_slice()))
    }
}

/// How a dilation was specified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DilationSpec {
    /// Apex dilation at vertex `apex`, optionally translated along the primitive edge
    /// directions; `translation[j]` is the shift toward vertex `j` (`translation[apex]`
    /// is zero).
    Apex {
        apex: usize,
        modulus: u32,
        translation: Vec<BigInt>,
    },
    /// Explicitly given vertices.
    Explicit { modulus: u32 },
}

/// A sub-simplex of a parent lattice simplex that equals `kQ + v` for a lattice simplex
/// `Q`. Vertices are indexed compatibly with the parent: for apex dilations, vertex `m`
/// lies on the edge from the apex toward parent vertex `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dilation {
    spec: DilationSpec,
    vertices: Vec<LatticeVector>,
    modulus: u32,
    parent: LatticeSimplex,
}

impl Dilation {
    /// The apex dilation at vertex `apex` with modulus `k`.
    pub fn apex(parent: &LatticeSimplex, apex: usize, k: u32) -> Result<Dilation> {
        let zeros = vec![BigInt::zero(); parent.dim()];
        Dilation::translated(parent, apex, k, &zeros)
    }

    /// The apex dilation shifted by `sum_j t_j u~_ij`; `t` has one nonnegative entry per
    /// vertex `j != apex`, in increasing `j` order.
    pub fn translated(
        parent: &LatticeSimplex,
        apex: usize,
        k: u32,
        t: &[BigInt],
    ) -> Result<Dilation> {
        let n = parent.dim();
        if apex > n {
            return Err(Error::IndexOutOfRange {
                index: apex,
                dim: n,
            });
        }
        if t.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.len(),
            });
        }
        if t.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidTranslation);
        }
        check_apex_modulus(parent, apex, k)?;
        if !translation_valid(parent, apex, k, t)? {
            return Err(Error::InvalidTranslation);
        }

        let lengths = parent.edge_length_matrix();
        let t_full = expand_translation(apex, t, n);
        let mut shift = LatticeVector::zero(n);
        for j in 0..=n {
            if j == apex || t_full[j].is_zero() {
                continue;
            }
            let dir = parent.primitive_direction(apex, j)?;
            shift = shift.add(&dir.scaled(&t_full[j]));
        }
        let mut vertices = Vec::with_capacity(n + 1);
        for j in 0..=n {
            if j == apex {
                vertices.push(parent.vertex(apex).add(&shift));
            } else {
                let l = lengths.get(apex, j);
                let reach = l - BigInt::from(residue(l, k));
                let dir = parent.primitive_direction(apex, j)?;
                vertices.push(parent.vertex(apex).add(&dir.scaled(&reach)).add(&shift));
            }
        }
        let dilation = Dilation {
            spec: DilationSpec::Apex {
                apex,
                modulus: k,
                translation: t_full,
            },
            vertices,
            modulus: k,
            parent: parent.clone(),
        };
        dilation.validate_geometry()?;
        Ok(dilation)
    }

    /// A dilation given by explicit vertices; validates containment in the parent,
    /// divisibility of all pairwise vertex differences by `k`, and full dimension.
    pub fn explicit(
        parent: &LatticeSimplex,
        k: u32,
        vertices: Vec<LatticeVector>,
    ) -> Result<Dilation> {
        if k < 2 {
            return Err(Error::ModulusOutOfRange {
                k,
                max: parent.min_edge_length().to_string(),
            });
        }
        let n = parent.dim();
        if vertices.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: vertices.len(),
            });
        }
        let dilation = Dilation {
            spec: DilationSpec::Explicit { modulus: k },
            vertices,
            modulus: k,
            parent: parent.clone(),
        };
        dilation.validate_geometry()?;
        Ok(dilation)
    }

    /// Checks the defining invariants: vertices inside the parent, pairwise differences
    /// divisible by the modulus, full dimension.
    fn validate_geometry(&self) -> Result<()> {
        let facets = self.parent.facet_system()?;
        for v in &self.vertices {
            if !facets.contains_lattice(v) {
                return Err(Error::VertexOutsideParent(v.to_string()));
            }
        }
        let k = BigInt::from(self.modulus);
        for v in &self.vertices[1..] {
            let diff = v.sub(&self.vertices[0]);
            if diff.coords().iter().any(|c| !c.mod_floor(&k).is_zero()) {
                return Err(Error::NotADilation(self.modulus));
            }
        }
        if affine_rank(&self.vertices) != self.parent.dim() {
            return Err(Error::DegenerateSimplex);
        }
        Ok(())
    }

    pub fn spec(&self) -> &DilationSpec {
        &self.spec
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn parent(&self) -> &LatticeSimplex {
        &self.parent
    }

    /// The dilation as a standalone simplex (vertex order as stored).
    pub fn as_simplex(&self) -> LatticeSimplex {
        LatticeSimplex::new(self.vertices.clone()).expect("dilation is full-dimensional")
    }

    /// The strict-inequality condition, in parent barycentric coordinates, for a point
    /// of the parent to lie outside this dilation.
    pub fn nonmembership(&self) -> Result<NonMembershipCondition> {
        match &self.spec {
            DilationSpec::Apex {
                apex,
                modulus,
                translation,
            } => {
                let t = contract_translation(*apex, translation);
                translated_nonmembership(&self.parent, *apex, *modulus, &t)
            }
            DilationSpec::Explicit { .. } => explicit_nonmembership(self),
        }
    }

    /// True iff the point with the given parent barycentric coordinates lies in this
    /// dilation. `lambda` must be simplex coordinates: nonnegative entries summing to
    /// one.
    pub fn contains(&self, lambda: &BarycentricCoords) -> Result<bool> {
        debug_assert!(lambda.is_inside());
        Ok(!self.nonmembership()?.holds_at(lambda))
    }
}

fn expand_translation(apex: usize, t: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut full = Vec::with_capacity(n + 1);
    let mut it = t.iter();
    for j in 0..=n {
        if j == apex {
            full.push(BigInt::zero());
        } else {
            full.push(it.next().expect("translation has n entries").clone());
        }
    }
    full
}

fn contract_translation(apex: usize, full: &[BigInt]) -> Vec<BigInt> {
    full.iter()
        .enumerate()
        .filter(|&(j, _)| j != apex)
        .map(|(_, x)| x.clone())
        .collect()
}

fn check_apex_modulus(parent: &LatticeSimplex, apex: usize, k: u32) -> Result<()> {
    let lengths = parent.edge_length_matrix();
    let min = lengths
        .incident(apex)
        .into_iter()
        .min()
        .expect("simplex has edges")
        .clone();
    if k < 2 || BigInt::from(k) > min {
        return Err(Error::ModulusOutOfRange {
            k,
            max: min.to_string(),
        });
    }
    Ok(())
}

/// Whether the translation by `sum_j t_j u~_ij` keeps the apex dilation inside the
/// parent: `sum_j t_j / l_ij <= min_s r_is / l_is`, evaluated exactly.
pub fn translation_valid(
    parent: &LatticeSimplex,
    apex: usize,
    k: u32,
    t: &[BigInt],
) -> Result<bool> {
    let n = parent.dim();
    if t.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: t.len(),
        });
    }
    check_apex_modulus(parent, apex, k)?;
    let lengths = parent.edge_length_matrix();
    let t_full = expand_translation(apex, t, n);
    let mut lhs = BigRational::zero();
    let mut rhs: Option<BigRational> = None;
    for j in 0..=n {
        if j == apex {
            continue;
        }
        let l = lengths.get(apex, j);
        lhs += BigRational::new(t_full[j].clone(), l.clone());
        let ratio = BigRational::new(BigInt::from(residue(l, k)), l.clone());
        rhs = Some(match rhs {
            None => ratio,
            Some(r) if ratio < r => ratio,
            Some(r) => r,
        });
    }
    Ok(lhs <= rhs.expect("simplex has edges"))
}

/// The single strict inequality equivalent to "outside the apex dilation":
/// `lambda_i - sum_{j != i} (r_ij / (l_ij - r_ij)) lambda_j < 0`.
pub fn apex_nonmembership(
    parent: &LatticeSimplex,
    apex: usize,
    k: u32,
) -> Result<StrictInequality> {
    let n = parent.dim();
    if apex > n {
        return Err(Error::IndexOutOfRange {
            index: apex,
            dim: n,
        });
    }
    check_apex_modulus(parent, apex, k)?;
    let lengths = parent.edge_length_matrix();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[apex] = BigRational::one();
    for j in 0..=n {
        if j == apex {
            continue;
        }
        coeffs[j] = -residue_fraction(lengths.get(apex, j), k);
    }
    Ok(StrictInequality {
        coeffs,
        rhs: BigRational::zero(),
    })
}

/// Non-membership condition for a translated apex dilation: one branch
/// `lambda_j < t_j / l_ij` per positive translation entry, plus the apex branch
/// shifted by `-sum_j t_j / (l_ij - r_ij)`.
pub fn translated_nonmembership(
    parent: &LatticeSimplex,
    apex: usize,
    k: u32,
    t: &[BigInt],
) -> Result<NonMembershipCondition> {
    if !translation_valid(parent, apex, k, t)? {
        return Err(Error::InvalidTranslation);
    }
    let n = parent.dim();
    let lengths = parent.edge_length_matrix();
    let t_full = expand_translation(apex, t, n);
    let mut branches = Vec::new();
    let mut shift = BigRational::zero();
    for j in 0..=n {
        if j == apex {
            continue;
        }
        let l = lengths.get(apex, j);
        if t_full[j].is_positive() {
            let mut coeffs = vec![BigRational::zero(); n + 1];
            coeffs[j] = BigRational::one();
            branches.push(StrictInequality {
                coeffs,
                rhs: BigRational::new(t_full[j].clone(), l.clone()),
            });
        }
        let r = BigInt::from(residue(l, k));
        shift += BigRational::new(t_full[j].clone(), l - r);
    }
    let mut main = apex_nonmembership(parent, apex, k)?;
    main.rhs = -shift;
    branches.push(main);
    Ok(NonMembershipCondition::AnyOf(branches))
}

/// Non-membership condition for an explicitly given dilation: one branch per facet of
/// the dilation, rewritten as a linear condition on parent barycentric coordinates.
/// Branches that cannot hold anywhere on the standard simplex are pruned by exact LP;
/// if none survive, the condition is `Never`.
pub fn explicit_nonmembership(dilation: &Dilation) -> Result<NonMembershipCondition> {
    let parent = dilation.parent();
    let n = parent.dim();
    let facets = dilation.as_simplex().facet_system()?;
    let mut branches = Vec::new();
    for g in facets.functionals() {
        // In barycentric coordinates an affine functional is linear with coefficients
        // given by its values at the parent vertices.
        let coeffs: Vec<BigRational> = parent
            .vertices()
            .iter()
            .map(|u| BigRational::from_integer(g.eval_lattice(u)))
            .collect();
        let branch = StrictInequality {
            coeffs,
            rhs: BigRational::zero(),
        };
        if lp::strict_feasibility(std::slice::from_ref(&branch), n).is_feasible() {
            branches.push(branch);
        }
    }
    if branches.is_empty() {
        Ok(NonMembershipCondition::Never)
    } else {
        Ok(NonMembershipCondition::AnyOf(branches))
    }
}
