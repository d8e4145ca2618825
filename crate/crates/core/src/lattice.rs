//! Exact geometry of full-dimensional lattice simplices: lattice lengths of edges,
//! barycentric coordinates, facet systems, and lattice-point enumeration.
//!
//! All predicates are decided over arbitrary-precision integers and rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A point of the ambient lattice `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector::new(vec![BigInt::zero(); dim])
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scaled(&self, factor: &BigInt) -> LatticeVector {
        LatticeVector::new(self.coords.iter().map(|c| c * factor).collect())
    }

    /// Gcd of the absolute coordinate values; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn to_rational(&self) -> RationalPoint {
        RationalPoint::new(
            self.coords
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A point of the ambient space with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    coords: Vec<BigRational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// The lattice point with the same coordinates, if all of them are integers.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        if self.coords.iter().all(|c| c.is_integer()) {
            Some(LatticeVector::new(
                self.coords.iter().map(|c| c.to_integer()).collect(),
            ))
        } else {
            None
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Lattice length of the edge `[a, b]`: the number of lattice points on the segment
/// minus one, i.e. the gcd of the coordinates of `b - a`.
pub fn lattice_length(a: &LatticeVector, b: &LatticeVector) -> Result<BigInt> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    if a == b {
        return Err(Error::DegenerateEdge);
    }
    Ok(b.sub(a).content())
}

/// Symmetric matrix of pairwise edge lattice lengths of a simplex; the diagonal is unused
/// and stored as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLengthMatrix {
    l: Vec<Vec<BigInt>>,
}

impl EdgeLengthMatrix {
    /// Builds a matrix from explicit entries; validates symmetry and positivity of the
    /// off-diagonal entries. The diagonal is ignored.
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<Self> {
        let m = entries.len();
        for row in &entries {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: row.len(),
                });
            }
        }
        let mut l = vec![vec![BigInt::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                if entries[i][j] != entries[j][i] || !entries[i][j].is_positive() {
                    return Err(Error::InvalidFile(format!(
                        "edge length matrix entry ({i},{j}) must be positive and symmetric"
                    )));
                }
                l[i][j] = entries[i][j].clone();
            }
        }
        Ok(EdgeLengthMatrix { l })
    }

    /// Number of vertices (n + 1 for a simplex of dimension n).
    pub fn order(&self) -> usize {
        self.l.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.l[i][j]
    }

    /// Minimum lattice length over all edges, `l(P)`.
    pub fn min_length(&self) -> BigInt {
        let mut min: Option<&BigInt> = None;
        for i in 0..self.order() {
            for j in (i + 1)..self.order() {
                match min {
                    Some(m) if m <= &self.l[i][j] => {}
                    _ => min = Some(&self.l[i][j]),
                }
            }
        }
        min.cloned().expect("matrix has at least two vertices")
    }

    /// Lengths of the edges incident to vertex `i`, i.e. row `i` without the diagonal.
    pub fn incident(&self, i: usize) -> Vec<&BigInt> {
        (0..self.order())
            .filter(|&j| j != i)
            .map(|j| &self.l[i][j])
            .collect()
    }
}

impl fmt::Display for EdgeLengthMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.order();
        let width = self
            .l
            .iter()
            .flat_map(|row| row.iter().map(|e| e.to_string().len()))
            .max()
            .unwrap_or(1);
        for i in 0..m {
            for j in 0..m {
                if j > 0 {
                    write!(f, " ")?;
                }
                if i == j {
                    write!(f, "{:>width$}", ".")?;
                } else {
                    write!(f, "{:>width$}", self.l[i][j].to_string())?;
                }
            }
            if i + 1 < m {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Exact barycentric coordinates with respect to a fixed simplex. The entries always sum
/// to one; negative entries are allowed (the point is in the simplex iff all entries are
/// nonnegative).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarycentricCoords {
    lambda: Vec<BigRational>,
}

impl BarycentricCoords {
    pub fn new(lambda: Vec<BigRational>) -> Result<Self> {
        let sum: BigRational = lambda.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidFile(format!(
                "barycentric coordinates sum to {sum}, expected 1"
            )));
        }
        Ok(BarycentricCoords { lambda })
    }

    /// Indicator coordinates of vertex `i` in a simplex with `order` vertices.
    pub fn vertex(order: usize, i: usize) -> Self {
        let mut lambda = vec![BigRational::zero(); order];
        lambda[i] = BigRational::one();
        BarycentricCoords { lambda }
    }

    pub fn order(&self) -> usize {
        self.lambda.len()
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.lambda
    }

    pub fn get(&self, i: usize) -> &BigRational {
        &self.lambda[i]
    }

    /// True iff all coordinates are nonnegative, i.e. the point lies in the simplex.
    pub fn is_inside(&self) -> bool {
        self.lambda.iter().all(|c| !c.is_negative())
    }

    /// Lossy float view, for reporting and plotting only.
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.lambda
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Display for BarycentricCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.lambda.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An integer affine functional `offset + coeffs . x`, used as one facet inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFunctional {
    pub coeffs: Vec<BigInt>,
    pub offset: BigInt,
}

impl AffineFunctional {
    pub fn eval_lattice(&self, p: &LatticeVector) -> BigInt {
        let mut acc = self.offset.clone();
        for (c, x) in self.coeffs.iter().zip(p.coords()) {
            acc += c * x;
        }
        acc
    }

    pub fn eval_rational(&self, p: &RationalPoint) -> BigRational {
        let mut acc = BigRational::from_integer(self.offset.clone());
        for (c, x) in self.coeffs.iter().zip(p.coords()) {
            acc += BigRational::from_integer(c.clone()) * x;
        }
        acc
    }

    /// Divides all coefficients by their gcd (no-op for the zero functional).
    fn reduce(&mut self) {
        let mut g = self.offset.clone();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if g > BigInt::one() {
            self.offset = &self.offset / &g;
            for c in &mut self.coeffs {
                *c = &*c / &g;
            }
        }
    }
}

/// The `n + 1` facet inequalities of a full-dimensional simplex. A point belongs to the
/// simplex iff every functional evaluates nonnegatively; functional `f` vanishes exactly
/// on the facet opposite vertex `f`.
#[derive(Debug, Clone)]
pub struct FacetSystem {
    functionals: Vec<AffineFunctional>,
}

impl FacetSystem {
    pub fn functionals(&self) -> &[AffineFunctional] {
        &self.functionals
    }

    pub fn contains_lattice(&self, p: &LatticeVector) -> bool {
        self.functionals
            .iter()
            .all(|g| !g.eval_lattice(p).is_negative())
    }

    pub fn contains_rational(&self, p: &RationalPoint) -> bool {
        self.functionals
            .iter()
            .all(|g| !g.eval_rational(p).is_negative())
    }
}

/// Facet system of the full-dimensional simplex spanned by `n + 1` rational points.
///
/// Each functional is computed from cofactor minors of the facet's vertex matrix, scaled
/// to integer coefficients with gcd one, and signed so that it is positive at the
/// opposite vertex.
pub fn facet_system(vertices: &[RationalPoint]) -> Result<FacetSystem> {
    let n = match vertices.first() {
        Some(v) => v.dim(),
        None => return Err(Error::DegenerateSimplex),
    };
    if vertices.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            got: vertices.len(),
        });
    }
    let mut functionals = Vec::with_capacity(n + 1);
    for f in 0..=n {
        // Integer row [s, s*w] for every vertex w except f, with s clearing denominators.
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for (m, w) in vertices.iter().enumerate() {
            if m == f {
                continue;
            }
            let scale = w
                .coords()
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let mut row = Vec::with_capacity(n + 1);
            row.push(scale.clone());
            for c in w.coords() {
                let scaled = c * BigRational::from_integer(scale.clone());
                debug_assert!(scaled.is_integer());
                row.push(scaled.to_integer());
            }
            rows.push(row);
        }
        // Coefficient j of the functional is (-1)^(n+j) times the minor without column j.
        let mut coeffs = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let minor: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let mut d = bigint_determinant(minor);
            if (n + j) % 2 == 1 {
                d = -d;
            }
            coeffs.push(d);
        }
        let mut g = AffineFunctional {
            offset: coeffs[0].clone(),
            coeffs: coeffs[1..].to_vec(),
        };
        let at_opposite = g.eval_rational(&vertices[f]);
        if at_opposite.is_zero() {
            return Err(Error::DegenerateSimplex);
        }
        if at_opposite.is_negative() {
            g.offset = -g.offset;
            for c in &mut g.coeffs {
                *c = -&*c;
            }
        }
        g.reduce();
        functionals.push(g);
    }
    Ok(FacetSystem { functionals })
}

/// A full-dimensional lattice simplex `Conv(u_0, ..., u_n)` in `Z^n`. Vertex order is
/// preserved exactly as given; apex indices elsewhere refer to this order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSimplex {
    vertices: Vec<LatticeVector>,
}

impl LatticeSimplex {
    pub fn new(vertices: Vec<LatticeVector>) -> Result<Self> {
        let n = match vertices.first() {
            Some(v) => v.dim(),
            None => return Err(Error::DegenerateSimplex),
        };
        if vertices.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: vertices.len(),
            });
        }
        for v in &vertices {
            if v.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.dim(),
                });
            }
        }
        let diffs: Vec<Vec<BigInt>> = vertices[1..]
            .iter()
            .map(|v| v.sub(&vertices[0]).coords().to_vec())
            .collect();
        if bigint_determinant(diffs).is_zero() {
            return Err(Error::DegenerateSimplex);
        }
        Ok(LatticeSimplex { vertices })
    }

    pub fn from_i64(vertices: &[&[i64]]) -> Result<Self> {
        LatticeSimplex::new(
            vertices
                .iter()
                .map(|v| LatticeVector::from_i64(v))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &LatticeVector {
        &self.vertices[i]
    }

    /// The simplex with all vertices multiplied by a positive factor.
    pub fn dilated(&self, factor: &BigInt) -> LatticeSimplex {
        LatticeSimplex {
            vertices: self.vertices.iter().map(|v| v.scaled(factor)).collect(),
        }
    }

    /// Absolute determinant of the vertex-difference matrix: `dim!` times the
    /// Euclidean volume, an upper proxy for the lattice-point count.
    pub fn normalized_volume(&self) -> BigInt {
        let diffs: Vec<Vec<BigInt>> = self.vertices[1..]
            .iter()
            .map(|v| v.sub(&self.vertices[0]).coords().to_vec())
            .collect();
        bigint_determinant(diffs).abs()
    }

    /// The simplex with vertices reordered as `vertices[perm[i]]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<LatticeSimplex> {
        if perm.len() != self.vertices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vertices.len(),
                got: perm.len(),
            });
        }
        LatticeSimplex::new(perm.iter().map(|&i| self.vertices[i].clone()).collect())
    }

    pub fn edge_length_matrix(&self) -> EdgeLengthMatrix {
        let m = self.vertices.len();
        let mut l = vec![vec![BigInt::zero(); m]; m];
        for i in 0..m {
            for j in (i + 1)..m {
                let len = lattice_length(&self.vertices[i], &self.vertices[j])
                    .expect("distinct vertices of a simplex");
                l[i][j] = len.clone();
                l[j][i] = len;
            }
        }
        EdgeLengthMatrix { l }
    }

    /// Minimum edge lattice length `l(P)`.
    pub fn min_edge_length(&self) -> BigInt {
        self.edge_length_matrix().min_length()
    }

    /// Primitive direction of the edge from vertex `i` to vertex `j`:
    /// `(u_j - u_i) / l_ij`, an integer vector with coordinate gcd one.
    pub fn primitive_direction(&self, i: usize, j: usize) -> Result<LatticeVector> {
        let m = self.vertices.len();
        if i >= m || j >= m {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                dim: self.dim(),
            });
        }
        if i == j {
            return Err(Error::DegenerateEdge);
        }
        let diff = self.vertices[j].sub(&self.vertices[i]);
        let g = diff.content();
        Ok(LatticeVector::new(
            diff.coords().iter().map(|c| c / &g).collect(),
        ))
    }

    /// Exact barycentric coordinates of `p`; entries may be negative when `p` lies
    /// outside the simplex. `from_barycentric` is the exact inverse.
    pub fn to_barycentric(&self, p: &RationalPoint) -> Result<BarycentricCoords> {
        let n = self.dim();
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.dim(),
            });
        }
        let mut matrix = Vec::with_capacity(n + 1);
        for c in 0..n {
            matrix.push(
                self.vertices
                    .iter()
                    .map(|v| BigRational::from_integer(v.coords()[c].clone()))
                    .collect::<Vec<_>>(),
            );
        }
        matrix.push(vec![BigRational::one(); n + 1]);
        let mut rhs: Vec<BigRational> = p.coords().to_vec();
        rhs.push(BigRational::one());
        let lambda = solve_linear(matrix, rhs).ok_or(Error::DegenerateSimplex)?;
        BarycentricCoords::new(lambda)
    }

    pub fn from_barycentric(&self, lambda: &BarycentricCoords) -> RationalPoint {
        let n = self.dim();
        let mut coords = vec![BigRational::zero(); n];
        for (l, v) in lambda.as_slice().iter().zip(&self.vertices) {
            for (acc, c) in coords.iter_mut().zip(v.coords()) {
                *acc += l * BigRational::from_integer(c.clone());
            }
        }
        RationalPoint::new(coords)
    }

    pub fn centroid(&self) -> BarycentricCoords {
        let m = self.vertices.len();
        let w = BigRational::new(BigInt::one(), BigInt::from(m as i64));
        BarycentricCoords { lambda: vec![w; m] }
    }

    pub fn facet_system(&self) -> Result<FacetSystem> {
        let rational: Vec<RationalPoint> = self.vertices.iter().map(|v| v.to_rational()).collect();
        facet_system(&rational)
    }

    /// All lattice points of the simplex, sorted lexicographically.
    pub fn lattice_points(&self, cell_cap: u64) -> Result<Vec<LatticeVector>> {
        let rational: Vec<RationalPoint> = self.vertices.iter().map(|v| v.to_rational()).collect();
        hull_lattice_points(&rational, cell_cap)
    }
}

/// Default candidate-cell budget for lattice-point enumeration.
pub const DEFAULT_CELL_CAP: u64 = 10_000_000;

/// Lattice points of the convex hull of affinely independent rational points, sorted
/// lexicographically. Handles lower-dimensional simplices (e.g. segments) as well as
/// full-dimensional ones.
///
/// The enumeration scans the integer bounding box; `cell_cap` bounds the number of
/// candidate cells in the box.
pub fn hull_lattice_points(
    vertices: &[RationalPoint],
    cell_cap: u64,
) -> Result<Vec<LatticeVector>> {
    let n = match vertices.first() {
        Some(v) => v.dim(),
        None => return Err(Error::DegenerateSimplex),
    };
    if vertices.iter().any(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: vertices.iter().map(|v| v.dim()).find(|&d| d != n).unwrap(),
        });
    }

    // Integer bounding box.
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for c in 0..n {
        let mut min = vertices[0].coords()[c].clone();
        let mut max = min.clone();
        for v in &vertices[1..] {
            let x = &v.coords()[c];
            if *x < min {
                min = x.clone();
            }
            if *x > max {
                max = x.clone();
            }
        }
        lo.push(min.ceil().to_integer());
        hi.push(max.floor().to_integer());
    }
    let mut cells = BigInt::one();
    for c in 0..n {
        let extent = &hi[c] - &lo[c] + BigInt::one();
        if extent.is_negative() || extent.is_zero() {
            return Ok(Vec::new());
        }
        cells *= extent;
    }
    if cells > BigInt::from(cell_cap) {
        return Err(Error::EnumerationBudget {
            candidates: cells.to_string().parse().unwrap_or(u128::MAX),
            cap: cell_cap,
        });
    }

    if vertices.len() == n + 1 {
        full_dim_points(vertices, &lo, &hi)
    } else {
        low_dim_points(vertices, &lo, &hi)
    }
}

/// Full-dimensional case: facet filtering with an exact integer interval on the last
/// axis of every column of the bounding box.
fn full_dim_points(
    vertices: &[RationalPoint],
    lo: &[BigInt],
    hi: &[BigInt],
) -> Result<Vec<LatticeVector>> {
    let n = lo.len();
    let facets = facet_system(vertices)?;
    let mut points = Vec::new();
    let mut cursor: Vec<BigInt> = lo[..n - 1].to_vec();
    'columns: loop {
        // Partial facet values with the first n-1 coordinates fixed.
        let mut t_lo = lo[n - 1].clone();
        let mut t_hi = hi[n - 1].clone();
        let mut feasible = true;
        for g in facets.functionals() {
            let mut val = g.offset.clone();
            for c in 0..n - 1 {
                val += &g.coeffs[c] * &cursor[c];
            }
            let a = &g.coeffs[n - 1];
            if a.is_zero() {
                if val.is_negative() {
                    feasible = false;
                    break;
                }
            } else {
                // a * t + val >= 0
                let bound = BigRational::new(-val, a.clone());
                if a.is_positive() {
                    let b = bound.ceil().to_integer();
                    if b > t_lo {
                        t_lo = b;
                    }
                } else {
                    let b = bound.floor().to_integer();
                    if b < t_hi {
                        t_hi = b;
                    }
                }
            }
        }
        if feasible {
            let mut t = t_lo.clone();
            while t <= t_hi {
                let mut coords = cursor.clone();
                coords.push(t.clone());
                points.push(LatticeVector::new(coords));
                t += 1;
            }
        }
        // Advance the odometer over the first n-1 axes (lexicographic order).
        for axis in (0..n - 1).rev() {
            cursor[axis] += 1;
            if cursor[axis] <= hi[axis] {
                continue 'columns;
            }
            cursor[axis] = lo[axis].clone();
        }
        break;
    }
    Ok(points)
}

/// Lower-dimensional case: scan the whole box and test membership through exact
/// barycentric consistency.
fn low_dim_points(
    vertices: &[RationalPoint],
    lo: &[BigInt],
    hi: &[BigInt],
) -> Result<Vec<LatticeVector>> {
    let n = lo.len();
    let mut points = Vec::new();
    let mut cursor: Vec<BigInt> = lo.to_vec();
    'cells: loop {
        let p = RationalPoint::new(
            cursor
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        );
        if let Some(lambda) = hull_coordinates(vertices, &p) {
            if lambda.iter().all(|l| !l.is_negative()) {
                points.push(LatticeVector::new(cursor.clone()));
            }
        }
        for axis in (0..n).rev() {
            cursor[axis] += 1;
            if cursor[axis] <= hi[axis] {
                continue 'cells;
            }
            cursor[axis] = lo[axis].clone();
        }
        break;
    }
    Ok(points)
}

/// Solves `sum lambda_i v_i = p, sum lambda_i = 1` for affinely independent `v_i`;
/// returns `None` when the (possibly overdetermined) system is inconsistent.
pub(crate) fn hull_coordinates(
    vertices: &[RationalPoint],
    p: &RationalPoint,
) -> Option<Vec<BigRational>> {
    let n = p.dim();
    let k = vertices.len();
    // Rows: one per ambient coordinate plus the affine row.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(n + 1);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(n + 1);
    for c in 0..n {
        rows.push(vertices.iter().map(|v| v.coords()[c].clone()).collect());
        rhs.push(p.coords()[c].clone());
    }
    rows.push(vec![BigRational::one(); k]);
    rhs.push(BigRational::one());
    solve_overdetermined(rows, rhs, k)
}

/// Bareiss fraction-free determinant of a square integer matrix.
pub(crate) fn bigint_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign_negative = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return BigInt::zero(),
        };
        if pivot != k {
            m.swap(pivot, k);
            sign_negative = !sign_negative;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_negative {
        -det
    } else {
        det
    }
}

/// Gaussian elimination over the rationals for a square system; `None` when singular.
pub(crate) fn solve_linear(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &inv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
            let sub = &factor * &b[col];
            b[r] -= sub;
        }
    }
    Some(
        (0..n)
            .map(|i| &b[i] / &a[i][i])
            .collect::<Vec<BigRational>>(),
    )
}

/// Solves an overdetermined consistent system with `k` unknowns by eliminating on the
/// first `k` independent rows and verifying the rest; `None` when inconsistent or the
/// column rank is below `k`.
fn solve_overdetermined(
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    k: usize,
) -> Option<Vec<BigRational>> {
    // Select k independent rows by elimination.
    let mut work: Vec<(Vec<BigRational>, BigRational)> = rows.into_iter().zip(rhs).collect();
    let mut selected: Vec<(Vec<BigRational>, BigRational)> = Vec::with_capacity(k);
    let mut col = 0;
    let mut idx = 0;
    while col < k && idx < work.len() {
        if let Some(p) = (idx..work.len()).find(|&r| !work[r].0[col].is_zero()) {
            work.swap(idx, p);
            let (prow, prhs) = work[idx].clone();
            for r in (idx + 1)..work.len() {
                if work[r].0[col].is_zero() {
                    continue;
                }
                let factor = &work[r].0[col] / &prow[col];
                for c in col..k {
                    let sub = &factor * &prow[c];
                    work[r].0[c] -= sub;
                }
                let sub = &factor * &prhs;
                work[r].1 -= sub;
            }
            selected.push((prow, prhs));
            idx += 1;
        }
        col += 1;
    }
    if selected.len() < k {
        return None; // affinely dependent vertex set
    }
    // Remaining (eliminated) rows must be identically zero = zero.
    for (row, r) in &work[idx..] {
        if row.iter().any(|c| !c.is_zero()) || !r.is_zero() {
            return None;
        }
    }
    let (a, b): (Vec<_>, Vec<_>) = selected.into_iter().unzip();
    solve_linear(a, b)
}

/// Rank of the affine span of a point set (0 for a single point).
pub(crate) fn affine_rank(points: &[LatticeVector]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|p| {
            p.sub(&points[0])
                .coords()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        })
        .collect();
    matrix_rank(rows)
}

pub(crate) fn matrix_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &prow[col];
            for c in col..cols {
                let sub = &factor * &prow[c];
                row[c] -= sub;
            }
        }
        rank += 1;
    }
    rank
}
