//! toric local models of contractible curve configurations.
//!
//! two builtin models:
//! - `single(n)`: total space of O(-n) on a rational curve, two charts
//!   glued by y = x^{-1}, v = u x^n.
//! - `chain(n1, n2)`: three charts glued by y = x^{-1}, v = u x^{n1} and
//!   w = v^{-1}, z = y v^{n2}; the outer overlap is the double localization
//!   C[x,u]_{x,u}.
//!
//! charts and gluings are monomial throughout, which preserves the Z^2
//! weight grading that makes cohomology finite weight by weight.

use crate::algebra::Rat;
use crate::laurent::{wadd, wneg, ChartRing, LaurentElement, Weight};
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    Single { n: i64 },
    Chain { n1: i64, n2: i64 },
}

/// matrix of Laurent elements, used for rank >= 1 transitions and
/// complex differentials.
pub type LMatrix = Vec<Vec<LaurentElement>>;

pub fn lmat_id(ring: &ChartRing, r: usize) -> LMatrix {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { LaurentElement::one(ring) } else { LaurentElement::zero(ring) })
                .collect()
        })
        .collect()
}

pub fn lmat_mul(a: &LMatrix, b: &LMatrix) -> LMatrix {
    let rows = a.len();
    let inner = b.len();
    let cols = b[0].len();
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = a[i][0].mul(&b[0][j]);
                    for k in 1..inner {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn lmat_subst(m: &LMatrix, target: &ChartRing, images: &[Vec<i64>]) -> LMatrix {
    m.iter().map(|row| row.iter().map(|e| e.substitute(target, images)).collect()).collect()
}

/// exact inverse by elimination; pivots must be single monomials (true for
/// every transition matrix in this crate, which are triangular with
/// monomial diagonal).
pub fn lmat_inverse(m: &LMatrix, ring: &ChartRing) -> LMatrix {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = lmat_id(ring, n);
    for col in 0..n {
        let pr = (col..n)
            .find(|&r| a[r][col].terms.len() == 1)
            .expect("no monomial pivot while inverting transition matrix");
        a.swap(col, pr);
        inv.swap(col, pr);
        let (pe, pc) = {
            let (e, c) = a[col][col].terms.iter().next().unwrap();
            (e.clone(), c.clone())
        };
        let pivot_inv = LaurentElement::monomial(
            ring,
            &pe.iter().map(|x| -x).collect::<Vec<_>>(),
            pc.recip(),
        );
        for j in 0..n {
            a[col][j] = a[col][j].mul(&pivot_inv);
            inv[col][j] = inv[col][j].mul(&pivot_inv);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let s1 = f.mul(&a[col][j]);
                    a[r][j] = a[r][j].sub(&s1);
                    let s2 = f.mul(&inv[col][j]);
                    inv[r][j] = inv[r][j].sub(&s2);
                }
            }
        }
    }
    inv
}

/// a curve given by one local equation per chart (1 where it misses the chart).
#[derive(Debug, Clone)]
pub struct Curve {
    pub name: String,
    /// exponent vector of the (monomial) equation in each chart's coordinates
    pub equations: Vec<Vec<i64>>,
}

/// divisor supported on the model's curves: sum of coeffs[i] * C_i + l * L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub curve_coeffs: Vec<i64>,
    pub l_coeff: i64,
}

impl Divisor {
    pub fn zero(ncurves: usize) -> Self {
        Divisor { curve_coeffs: vec![0; ncurves], l_coeff: 0 }
    }

    pub fn neg(&self) -> Self {
        Divisor {
            curve_coeffs: self.curve_coeffs.iter().map(|c| -c).collect(),
            l_coeff: -self.l_coeff,
        }
    }

    pub fn add(&self, other: &Divisor) -> Self {
        Divisor {
            curve_coeffs: self
                .curve_coeffs
                .iter()
                .zip(&other.curve_coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            l_coeff: self.l_coeff + other.l_coeff,
        }
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.curve_coeffs.iter().enumerate() {
            if *c != 0 {
                parts.push(format!("{c}*C{}", i + 1));
            }
        }
        if self.l_coeff != 0 {
            parts.push(format!("{}*L", self.l_coeff));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// the toric local model: charts, monomial gluings, curves.
#[derive(Debug)]
pub struct ToricModel {
    pub tag: ModelTag,
    pub charts: Vec<ChartRing>,
    /// images[(j, i)][k] = exponent vector, in chart-i coordinates, of the
    /// k-th coordinate of chart j. defined for every ordered pair j != i.
    pub images: BTreeMap<(usize, usize), Vec<Vec<i64>>>,
    pub curves: Vec<Curve>,
    /// exponent vector of the equation of L in each chart
    pub l_equations: Vec<Vec<i64>>,
}

impl ToricModel {
    pub fn ncharts(&self) -> usize {
        self.charts.len()
    }

    /// express a chart-`from` element in chart-`to` coordinates.
    pub fn transport(&self, e: &LaurentElement, from: usize, to: usize) -> LaurentElement {
        if from == to {
            return e.clone();
        }
        e.substitute(&self.charts[to], &self.images[&(from, to)])
    }

    pub fn transport_mat(&self, m: &LMatrix, from: usize, to: usize) -> LMatrix {
        if from == to {
            return m.clone();
        }
        lmat_subst(m, &self.charts[to], &self.images[&(from, to)])
    }

    /// all nonempty overlaps of the cover, as sorted index tuples,
    /// ordered by level then lexicographically.
    pub fn overlaps(&self) -> Vec<Vec<usize>> {
        use itertools::Itertools;
        let n = self.ncharts();
        (1..=n).flat_map(|size| (0..n).combinations(size)).collect()
    }

    /// indices of chart-min(overlap) coordinates that are NOT invertible on
    /// the overlap ring.
    pub fn noninvertible_vars(&self, overlap: &[usize]) -> Vec<usize> {
        let i0 = overlap[0];
        let nv = self.charts[i0].nvars();
        if overlap.len() == 1 {
            return (0..nv).collect();
        }
        // a chart-i0 variable is invertible on the overlap iff its vanishing
        // locus misses the overlap. we detect this through the gluing data:
        // variable k is invertible iff, for every other chart j in the
        // overlap, the monomial images make x_k a unit there, i.e. x_k maps
        // to a Laurent monomial with some negative entry or the overlap
        // localization already inverts it. concretely we hardcode per model,
        // which keeps this decision auditable.
        match self.tag {
            ModelTag::Single { .. } => {
                // charts {0,1}: overlap U1 cap U2 = {x != 0}
                vec![1] // u stays non-invertible
            }
            ModelTag::Chain { .. } => {
                let o: Vec<usize> = overlap.to_vec();
                if o == vec![0, 1] {
                    vec![1] // C[x,u]_x
                } else if o == vec![1, 2] {
                    vec![0] // C[y,v]_v : y stays non-invertible
                } else {
                    Vec::new() // {0,2} and {0,1,2}: C[x,u]_{x,u}
                }
            }
        }
    }

    /// local equation (exponent vector) of a divisor in the given chart.
    pub fn divisor_equation(&self, d: &Divisor, chart: usize) -> Vec<i64> {
        let nv = self.charts[chart].nvars();
        let mut e = vec![0i64; nv];
        for (ci, &c) in d.curve_coeffs.iter().enumerate() {
            for (k, &ek) in self.curves[ci].equations[chart].iter().enumerate() {
                e[k] += c * ek;
            }
        }
        for (k, &ek) in self.l_equations[chart].iter().enumerate() {
            e[k] += d.l_coeff * ek;
        }
        e
    }
}

/// build one of the two builtin models.
pub fn build_model(tag: ModelTag) -> Arc<ToricModel> {
    match tag {
        ModelTag::Single { n } => {
            assert!(n >= 1, "single(n) needs n >= 1");
            let u1 = ChartRing::new("U1", &[("x", (1, 0)), ("u", (0, 1))]);
            let u2 = ChartRing::new("U2", &[("y", (-1, 0)), ("v", (n, 1))]);
            let mut images = BTreeMap::new();
            // chart 2 coords in chart 1: y = x^{-1}, v = u x^n
            images.insert((1usize, 0usize), vec![vec![-1, 0], vec![n, 1]]);
            // chart 1 coords in chart 2: x = y^{-1}, u = v y^n
            images.insert((0usize, 1usize), vec![vec![-1, 0], vec![n, 1]]);
            let curves = vec![Curve {
                name: "C".into(),
                // u in U1, v in U2
                equations: vec![vec![0, 1], vec![0, 1]],
            }];
            let l_equations = vec![vec![1, 0], vec![0, 0]]; // x in U1, misses U2
            Arc::new(ToricModel { tag, charts: vec![u1, u2], images, curves, l_equations })
        }
        ModelTag::Chain { n1, n2 } => {
            assert!(n1 >= 2 && n2 >= 2, "chain(n1,n2) needs n1,n2 >= 2");
            let u1 = ChartRing::new("U1", &[("x", (1, 0)), ("u", (0, 1))]);
            let u2 = ChartRing::new("U2", &[("y", (-1, 0)), ("v", (n1, 1))]);
            let u3 = ChartRing::new(
                "U3",
                &[("z", (n1 * n2 - 1, n2)), ("w", (-n1, -1))],
            );
            let mut images = BTreeMap::new();
            // in chart 1 coords: y = x^{-1}, v = u x^{n1},
            //                    z = x^{n1 n2 - 1} u^{n2}, w = u^{-1} x^{-n1}
            images.insert((1usize, 0usize), vec![vec![-1, 0], vec![n1, 1]]);
            images.insert((2usize, 0usize), vec![vec![n1 * n2 - 1, n2], vec![-n1, -1]]);
            // in chart 2 coords: x = y^{-1}, u = v y^{n1}, z = y v^{n2}, w = v^{-1}
            images.insert((0usize, 1usize), vec![vec![-1, 0], vec![n1, 1]]);
            images.insert((2usize, 1usize), vec![vec![1, n2], vec![0, -1]]);
            // in chart 3 coords: y = z w^{n2}, v = w^{-1},
            //                    x = z^{-1} w^{-n2}, u = z^{n1} w^{n1 n2 - 1}
            images.insert((1usize, 2usize), vec![vec![1, n2], vec![0, -1]]);
            images.insert((0usize, 2usize), vec![vec![-1, -n2], vec![n1, n1 * n2 - 1]]);
            let curves = vec![
                Curve {
                    name: "C1".into(),
                    // u in U1, v in U2, misses U3
                    equations: vec![vec![0, 1], vec![0, 1], vec![0, 0]],
                },
                Curve {
                    name: "C2".into(),
                    // misses U1, y in U2, z in U3
                    equations: vec![vec![0, 0], vec![1, 0], vec![1, 0]],
                },
            ];
            let l_equations = vec![vec![0, 0], vec![0, 0], vec![0, 1]]; // w in U3
            Arc::new(ToricModel { tag, charts: vec![u1, u2, u3], images, curves, l_equations })
        }
    }
}

/// one term of a bundle complex: a free rank-r bundle with transition
/// matrices. line bundle sums are block-diagonal; the rank-2 extension
/// bundle of the chain model is genuinely mixed.
#[derive(Debug, Clone)]
pub struct TermBundle {
    pub rank: usize,
    pub labels: Vec<String>,
    /// trans[(i, j)] for i < j: the matrix e_{ij} with s_j = e_{ij} s_i,
    /// expressed in chart-i coordinates.
    pub trans: BTreeMap<(usize, usize), LMatrix>,
}

impl TermBundle {
    /// line bundle O_X(divisor): transitions f_{ij} = g_i / g_j where g is
    /// the chart local generator (the inverse divisor equation).
    pub fn line_bundle(model: &ToricModel, d: &Divisor) -> TermBundle {
        let nd = d.neg();
        let mut trans = BTreeMap::new();
        let n = model.ncharts();
        for i in 0..n {
            for j in i + 1..n {
                // g_i / g_j, all expressed in chart-i coordinates.
                // g = eq(-D), so f_{ij} = eq_i(-D) - eq_j(-D) as exponents.
                let gi = model.divisor_equation(&nd, i);
                let gj = model.divisor_equation(&nd, j);
                let gj_in_i = LaurentElement::monomial(&model.charts[j], &gj, Rat::one())
                    .substitute(&model.charts[i], &model.images[&(j, i)]);
                let gj_exp = gj_in_i.terms.keys().next().expect("monomial").clone();
                let f_exp: Vec<i64> = gi.iter().zip(&gj_exp).map(|(a, b)| a - b).collect();
                trans.insert(
                    (i, j),
                    vec![vec![LaurentElement::monomial(&model.charts[i], &f_exp, Rat::one())]],
                );
            }
        }
        TermBundle { rank: 1, labels: vec![format!("O({})", d)], trans }
    }

    /// direct sum, block diagonal transitions.
    pub fn direct_sum(model: &ToricModel, parts: &[TermBundle]) -> TermBundle {
        let rank: usize = parts.iter().map(|p| p.rank).sum();
        let labels: Vec<String> = parts.iter().flat_map(|p| p.labels.clone()).collect();
        let mut trans = BTreeMap::new();
        let n = model.ncharts();
        for i in 0..n {
            for j in i + 1..n {
                let ring = &model.charts[i];
                let mut m = vec![vec![LaurentElement::zero(ring); rank]; rank];
                let mut off = 0;
                for p in parts {
                    let t = &p.trans[&(i, j)];
                    for a in 0..p.rank {
                        for b in 0..p.rank {
                            m[off + a][off + b] = t[a][b].clone();
                        }
                    }
                    off += p.rank;
                }
                trans.insert((i, j), m);
            }
        }
        TermBundle { rank, labels, trans }
    }

    /// cocycle check: e_{ik} = e_{jk} e_{ij} on every triple overlap,
    /// compared in chart-i coordinates, and consistency e_{ij} invertible.
    pub fn check_cocycle(&self, model: &ToricModel) -> bool {
        let n = model.ncharts();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let eij = &self.trans[&(i, j)];
                    let ejk_in_i = model.transport_mat(&self.trans[&(j, k)], j, i);
                    let eik = &self.trans[&(i, k)];
                    let prod = lmat_mul(&ejk_in_i, eij);
                    if &prod != eik {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// a finite complex of term bundles; the rightmost term sits in degree 0.
#[derive(Debug, Clone)]
pub struct Complex {
    pub model: Arc<ToricModel>,
    pub name: String,
    pub terms: BTreeMap<i64, TermBundle>,
    /// diffs[s][chart]: matrix of the differential term_s -> term_{s+1} in
    /// that chart's coordinates and trivializations.
    pub diffs: BTreeMap<i64, Vec<LMatrix>>,
    /// equivariant weight of each basis section per (degree, chart),
    /// normalized so the differential has weight zero and the degree-0
    /// term starts from the divisor local-equation weights.
    pub lambda: BTreeMap<(i64, usize), Vec<Weight>>,
}

impl Complex {
    pub fn degrees(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn rank(&self, deg: i64) -> usize {
        self.terms.get(&deg).map_or(0, |t| t.rank)
    }

    /// homological shift: (C[k])^s = C^{s+k}, differential times (-1)^k.
    pub fn shifted(&self, k: i64) -> Complex {
        let terms = self.terms.iter().map(|(&s, t)| (s - k, t.clone())).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&s, ds)| {
                let signed = if k % 2 == 0 {
                    ds.clone()
                } else {
                    ds.iter()
                        .map(|m| m.iter().map(|row| row.iter().map(|e| e.neg()).collect()).collect())
                        .collect()
                };
                (s - k, signed)
            })
            .collect();
        let lambda = self.lambda.iter().map(|(&(s, i), v)| ((s - k, i), v.clone())).collect();
        Complex {
            model: self.model.clone(),
            name: format!("{}[{k}]", self.name),
            terms,
            diffs,
            lambda,
        }
    }

    /// assemble a complex, propagate equivariant weights, and verify
    /// d^2 = 0 and transition compatibility of the differentials.
    pub fn assemble(
        model: Arc<ToricModel>,
        name: &str,
        terms: BTreeMap<i64, TermBundle>,
        diffs: BTreeMap<i64, Vec<LMatrix>>,
    ) -> Complex {
        let mut c = Complex { model, name: name.to_string(), terms, diffs, lambda: BTreeMap::new() };
        c.check_differential();
        c.propagate_weights();
        c
    }

    fn check_differential(&self) {
        let model = &self.model;
        let degs = self.degrees();
        for &s in &degs {
            let Some(ds) = self.diffs.get(&s) else { continue };
            // d^2 = 0 chartwise
            if let Some(dn) = self.diffs.get(&(s + 1)) {
                for i in 0..model.ncharts() {
                    let prod = lmat_mul(&dn[i], &ds[i]);
                    assert!(
                        prod.iter().all(|row| row.iter().all(|e| e.is_zero())),
                        "{}: d^2 != 0 at degree {s}, chart {i}",
                        self.name
                    );
                }
            }
            // transition compatibility: D_j f_{ij} = e_{ij} D_i in chart-i coords
            let src = &self.terms[&s];
            let tgt = &self.terms[&(s + 1)];
            for i in 0..model.ncharts() {
                for j in i + 1..model.ncharts() {
                    let dj_in_i = model.transport_mat(&ds[j], j, i);
                    let lhs = lmat_mul(&dj_in_i, &src.trans[&(i, j)]);
                    let rhs = lmat_mul(&tgt.trans[&(i, j)], &ds[i]);
                    assert_eq!(lhs, rhs, "{}: differential not transition-compatible at degree {s}, charts ({i},{j})", self.name);
                }
            }
        }
    }

    /// solve for the equivariant weight of every (degree, chart, basis)
    /// from transitions and differentials. seeds the first basis vector of
    /// the largest degree at chart 0 with weight 0 shifted by nothing; any
    /// global shift is harmless (it moves every Hom window uniformly).
    fn propagate_weights(&mut self) {
        let model = self.model.clone();
        let mut lam: BTreeMap<(i64, usize), Vec<Option<Weight>>> = BTreeMap::new();
        for (&d, t) in &self.terms {
            for i in 0..model.ncharts() {
                lam.insert((d, i), vec![None; t.rank]);
            }
        }
        let top = *self.terms.keys().max().unwrap();
        lam.get_mut(&(top, 0)).unwrap()[0] = Some((0, 0));
        // constraint edges: transitions give lam_j[a] = lam_i[b] - wt(e[a][b]);
        // differentials give lam^{s+1}[a] = lam^s[b] - wt(D[a][b]).
        // nodes in different connected components never interact in any Hom
        // computation, so each component gets its own arbitrary seed.
        let mut changed = true;
        loop {
            if !changed {
                // converged: seed the next untouched component, if any
                let unassigned = lam
                    .iter()
                    .find_map(|(k, v)| v.iter().position(|o| o.is_none()).map(|i| (*k, i)));
                match unassigned {
                    Some((k, i)) => {
                        lam.get_mut(&k).unwrap()[i] = Some((0, 0));
                    }
                    None => break,
                }
            }
            changed = false;
            for (&d, t) in &self.terms {
                for i in 0..model.ncharts() {
                    for j in i + 1..model.ncharts() {
                        let e = &t.trans[&(i, j)];
                        for a in 0..t.rank {
                            for b in 0..t.rank {
                                if e[a][b].is_zero() {
                                    continue;
                                }
                                let w = e[a][b]
                                    .weight(&model.charts[i])
                                    .expect("inhomogeneous transition entry");
                                let li = lam[&(d, i)][b];
                                let lj = lam[&(d, j)][a];
                                match (li, lj) {
                                    (Some(li), None) => {
                                        lam.get_mut(&(d, j)).unwrap()[a] = Some(wadd(li, wneg(w)));
                                        changed = true;
                                    }
                                    (None, Some(lj)) => {
                                        lam.get_mut(&(d, i)).unwrap()[b] = Some(wadd(lj, w));
                                        changed = true;
                                    }
                                    (Some(li), Some(lj)) => {
                                        assert_eq!(
                                            lj,
                                            wadd(li, wneg(w)),
                                            "{}: transition weights inconsistent (deg {d}, charts {i},{j})",
                                            self.name
                                        );
                                    }
                                    (None, None) => {}
                                }
                            }
                        }
                    }
                }
            }
            for (&s, ds) in &self.diffs {
                let (rs, rt) = (self.rank(s), self.rank(s + 1));
                for i in 0..model.ncharts() {
                    for a in 0..rt {
                        for b in 0..rs {
                            if ds[i][a][b].is_zero() {
                                continue;
                            }
                            let w = ds[i][a][b]
                                .weight(&model.charts[i])
                                .expect("inhomogeneous differential entry");
                            let ls = lam[&(s, i)][b];
                            let lt = lam[&(s + 1, i)][a];
                            match (ls, lt) {
                                (Some(ls), None) => {
                                    lam.get_mut(&(s + 1, i)).unwrap()[a] = Some(wadd(ls, wneg(w)));
                                    changed = true;
                                }
                                (None, Some(lt)) => {
                                    lam.get_mut(&(s, i)).unwrap()[b] = Some(wadd(lt, w));
                                    changed = true;
                                }
                                (Some(ls), Some(lt)) => {
                                    assert_eq!(
                                        lt,
                                        wadd(ls, wneg(w)),
                                        "{}: differential weights inconsistent (deg {s}, chart {i})",
                                        self.name
                                    );
                                }
                                (None, None) => {}
                            }
                        }
                    }
                }
            }
        }
        for (k, v) in lam {
            let resolved: Vec<Weight> = v
                .into_iter()
                .map(|o| o.expect("disconnected weight propagation; seed another component"))
                .collect();
            self.lambda.insert(k, resolved);
        }
    }
}

/// the sheaves the engine resolves into bundle complexes.
#[derive(Debug, Clone, PartialEq)]
pub enum SheafName {
    /// O_C(k) on single(n)
    OnCurve { k: i64 },
    /// O_{C12}(a,b) on chain(n1,n2)
    OnChain { a: i64, b: i64 },
    /// O_C + O_C(-1)[1] on single(n), the three-term resolution
    SingleE,
    /// skyscraper at the torus-fixed origin of the first chart
    Point,
    /// the extension of O_{C12} by O_{C12}(0,-1)[1] along the
    /// distinguished boundary class
    ChainE,
}

fn zmat(ring: &ChartRing, rows: usize, cols: usize) -> LMatrix {
    vec![vec![LaurentElement::zero(ring); cols]; rows]
}

fn mono(ring: &ChartRing, e: &[i64]) -> LaurentElement {
    LaurentElement::monomial(ring, e, Rat::one())
}

fn mono_neg(ring: &ChartRing, e: &[i64]) -> LaurentElement {
    LaurentElement::monomial(ring, e, -Rat::one())
}

/// resolve a sheaf on the model as a complex of term bundles with the
/// rightmost O_X in degree 0 (shifts handled by the caller where needed).
pub fn resolve_sheaf(name: &SheafName, model: &Arc<ToricModel>) -> Complex {
    match (*name).clone() {
        SheafName::OnCurve { k } => {
            let ModelTag::Single { .. } = model.tag else { panic!("O_C(k) needs single(n)") };
            // O_C(k) = [O(-C+kL) -> O(kL)], differential u in both charts
            let d0 = Divisor { curve_coeffs: vec![0], l_coeff: k };
            let dm1 = Divisor { curve_coeffs: vec![-1], l_coeff: k };
            let mut terms = BTreeMap::new();
            terms.insert(0, TermBundle::line_bundle(model, &d0));
            terms.insert(-1, TermBundle::line_bundle(model, &dm1));
            let mut diffs = BTreeMap::new();
            diffs.insert(
                -1,
                (0..2).map(|i| vec![vec![mono(&model.charts[i], &model.curves[0].equations[i])]]).collect(),
            );
            Complex::assemble(model.clone(), &format!("O_C({k})"), terms, diffs)
        }
        SheafName::OnChain { a, b } => {
            let ModelTag::Chain { n2, .. } = model.tag else { panic!("O_C12(a,b) needs chain") };
            // twisting bundle of restriction bidegree (a, b): a*C2 + (a*n2 + b)*L
            let tw = Divisor { curve_coeffs: vec![0, a], l_coeff: a * n2 + b };
            let d0 = tw.clone();
            let dm1 = tw.add(&Divisor { curve_coeffs: vec![-1, -1], l_coeff: 0 });
            let mut terms = BTreeMap::new();
            terms.insert(0, TermBundle::line_bundle(model, &d0));
            terms.insert(-1, TermBundle::line_bundle(model, &dm1));
            // differential: local equation of C1 + C2
            let c12 = Divisor { curve_coeffs: vec![1, 1], l_coeff: 0 };
            let mut diffs = BTreeMap::new();
            diffs.insert(
                -1,
                (0..3)
                    .map(|i| vec![vec![mono(&model.charts[i], &model.divisor_equation(&c12, i))]])
                    .collect(),
            );
            Complex::assemble(model.clone(), &format!("O_C12({a},{b})"), terms, diffs)
        }
        SheafName::SingleE => {
            let ModelTag::Single { .. } = model.tag else { panic!("needs single(n)") };
            // [O(-C-L) -> O(-L) + O(-C) -> O], block differentials of the
            // direct sum O_C + O_C(-1)[1]
            let o = Divisor::zero(1);
            let oc = Divisor { curve_coeffs: vec![-1], l_coeff: 0 };
            let ol = Divisor { curve_coeffs: vec![0], l_coeff: -1 };
            let ocl = Divisor { curve_coeffs: vec![-1], l_coeff: -1 };
            let mut terms = BTreeMap::new();
            terms.insert(0, TermBundle::line_bundle(model, &o));
            terms.insert(
                -1,
                TermBundle::direct_sum(
                    model,
                    &[TermBundle::line_bundle(model, &ol), TermBundle::line_bundle(model, &oc)],
                ),
            );
            terms.insert(-2, TermBundle::line_bundle(model, &ocl));
            let mut diffs = BTreeMap::new();
            // the O_C(-1)[1] summand carries the shift sign on its differential
            let dm2: Vec<LMatrix> = (0..2)
                .map(|i| {
                    let ring = &model.charts[i];
                    let mut m = zmat(ring, 2, 1);
                    m[0][0] = mono_neg(ring, &model.curves[0].equations[i]);
                    m
                })
                .collect();
            let dm1: Vec<LMatrix> = (0..2)
                .map(|i| {
                    let ring = &model.charts[i];
                    let mut m = zmat(ring, 1, 2);
                    m[0][1] = mono(ring, &model.curves[0].equations[i]);
                    m
                })
                .collect();
            diffs.insert(-2, dm2);
            diffs.insert(-1, dm1);
            Complex::assemble(model.clone(), "O_C+O_C(-1)[1]", terms, diffs)
        }
        SheafName::Point => {
            // Koszul complex of the two coordinates of the first chart:
            // same terms as the curve resolutions, full differentials.
            // the skyscraper self-Ext dimensions do not depend on the point,
            // and the torus-fixed origin keeps everything weight-graded.
            match model.tag {
                ModelTag::Single { .. } => {
                    let o = Divisor::zero(1);
                    let oc = Divisor { curve_coeffs: vec![-1], l_coeff: 0 };
                    let ol = Divisor { curve_coeffs: vec![0], l_coeff: -1 };
                    let ocl = Divisor { curve_coeffs: vec![-1], l_coeff: -1 };
                    let mut terms = BTreeMap::new();
                    terms.insert(0, TermBundle::line_bundle(model, &o));
                    terms.insert(
                        -1,
                        TermBundle::direct_sum(
                            model,
                            &[
                                TermBundle::line_bundle(model, &ol),
                                TermBundle::line_bundle(model, &oc),
                            ],
                        ),
                    );
                    terms.insert(-2, TermBundle::line_bundle(model, &ocl));
                    // multiplication by x: entries x, 1 (L misses U2, where
                    // the O(-L) trivialization already absorbs the pole)
                    let xeq: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 0]];
                    let ueq: Vec<Vec<i64>> = vec![vec![0, 1], vec![0, 1]]; // eq of C: u, v
                    let dm2: Vec<LMatrix> = (0..2)
                        .map(|i| {
                            let ring = &model.charts[i];
                            let mut m = zmat(ring, 2, 1);
                            m[0][0] = mono(ring, &ueq[i]);
                            m[1][0] = mono_neg(ring, &xeq[i]);
                            m
                        })
                        .collect();
                    let dm1: Vec<LMatrix> = (0..2)
                        .map(|i| {
                            let ring = &model.charts[i];
                            let mut m = zmat(ring, 1, 2);
                            m[0][0] = mono(ring, &xeq[i]);
                            m[0][1] = mono(ring, &ueq[i]);
                            m
                        })
                        .collect();
                    let mut diffs = BTreeMap::new();
                    diffs.insert(-2, dm2);
                    diffs.insert(-1, dm1);
                    Complex::assemble(model.clone(), "O_pt", terms, diffs)
                }
                ModelTag::Chain { n2, .. } => {
                    // Koszul on (x, u) at the U1 origin. the zero locus of x
                    // is the fiber through that point, linearly equivalent to
                    // C2 + n2 L (div(x) = F - C2 - n2 L), so the first Koszul
                    // direction is O(-C2 - n2 L) and multiplication by x has
                    // chart entries x, x*y = 1, x*z*w^{n2} = 1.
                    let dxx = Divisor { curve_coeffs: vec![0, -1], l_coeff: -n2 };
                    let du = Divisor { curve_coeffs: vec![-1, 0], l_coeff: 0 };
                    let o = Divisor::zero(2);
                    let both = dxx.add(&du);
                    let mut terms = BTreeMap::new();
                    terms.insert(0, TermBundle::line_bundle(model, &o));
                    terms.insert(
                        -1,
                        TermBundle::direct_sum(
                            model,
                            &[
                                TermBundle::line_bundle(model, &dxx),
                                TermBundle::line_bundle(model, &du),
                            ],
                        ),
                    );
                    terms.insert(-2, TermBundle::line_bundle(model, &both));
                    let xeq: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 0], vec![0, 0]];
                    let ueq: Vec<Vec<i64>> =
                        (0..3).map(|i| model.divisor_equation(&du.neg(), i)).collect();
                    let dm2: Vec<LMatrix> = (0..3)
                        .map(|i| {
                            let ring = &model.charts[i];
                            let mut m = zmat(ring, 2, 1);
                            m[0][0] = mono(ring, &ueq[i]);
                            m[1][0] = mono_neg(ring, &xeq[i]);
                            m
                        })
                        .collect();
                    let dm1: Vec<LMatrix> = (0..3)
                        .map(|i| {
                            let ring = &model.charts[i];
                            let mut m = zmat(ring, 1, 2);
                            m[0][0] = mono(ring, &xeq[i]);
                            m[0][1] = mono(ring, &ueq[i]);
                            m
                        })
                        .collect();
                    let mut diffs = BTreeMap::new();
                    diffs.insert(-2, dm2);
                    diffs.insert(-1, dm1);
                    Complex::assemble(model.clone(), "O_pt", terms, diffs)
                }
            }
        }
        SheafName::ChainE => {
            let ModelTag::Chain { n1, n2 } = model.tag else { panic!("needs chain") };
            // [O(-L-C1-C2) -> V -> O] with V the rank-2 extension bundle
            let o = Divisor::zero(2);
            let olcc = Divisor { curve_coeffs: vec![-1, -1], l_coeff: -1 };
            let v = extension_bundle(model, n1, n2);
            let mut terms = BTreeMap::new();
            terms.insert(0, TermBundle::line_bundle(model, &o));
            terms.insert(-1, v);
            terms.insert(-2, TermBundle::line_bundle(model, &olcc));
            // chartwise differentials: d^{-2} = (eq(C1+C2); 0),
            // d^{-1} = (0, eq(C1+C2))
            let c12 = Divisor { curve_coeffs: vec![1, 1], l_coeff: 0 };
            let dm2: Vec<LMatrix> = (0..3)
                .map(|i| {
                    let ring = &model.charts[i];
                    let mut m = zmat(ring, 2, 1);
                    m[0][0] = mono(ring, &model.divisor_equation(&c12, i));
                    m
                })
                .collect();
            let dm1: Vec<LMatrix> = (0..3)
                .map(|i| {
                    let ring = &model.charts[i];
                    let mut m = zmat(ring, 1, 2);
                    m[0][1] = mono(ring, &model.divisor_equation(&c12, i));
                    m
                })
                .collect();
            let mut diffs = BTreeMap::new();
            diffs.insert(-2, dm2);
            diffs.insert(-1, dm1);
            Complex::assemble(model.clone(), "E(chain)", terms, diffs)
        }
    }
}

/// the rank-2 extension bundle of the chain model with the distinguished
/// boundary cocycle as extension class.
fn extension_bundle(model: &ToricModel, n1: i64, _n2: i64) -> TermBundle {
    let ModelTag::Chain { n2, .. } = model.tag else { unreachable!() };
    let r1 = &model.charts[0];
    let r2 = &model.charts[1];
    let mut trans = BTreeMap::new();
    // e_12 = [[1, 0], [0, y^{n1-1}]] in chart-1 coords: y = x^{-1}
    let mut e12 = zmat(r1, 2, 2);
    e12[0][0] = LaurentElement::one(r1);
    e12[1][1] = mono(r1, &[-(n1 - 1), 0]);
    trans.insert((0, 1), e12);
    // e_13 = [[w^{-1}, y^{n1-1} w^{-1}], [0, u z^{-1}]] in chart-1 coords:
    // w^{-1} = u x^{n1}; y^{n1-1} w^{-1} = u x; u z^{-1} = x^{1-n1 n2} u^{1-n2}
    let mut e13 = zmat(r1, 2, 2);
    e13[0][0] = mono(r1, &[n1, 1]);
    e13[0][1] = mono(r1, &[1, 1]);
    e13[1][1] = mono(r1, &[1 - n1 * n2, 1 - n2]);
    trans.insert((0, 2), e13);
    // e_23 = [[w^{-1}, w^{-1}], [0, w^{n2-1}]] in chart-2 coords: w^{-1} = v
    let mut e23 = zmat(r2, 2, 2);
    e23[0][0] = mono(r2, &[0, 1]);
    e23[0][1] = mono(r2, &[0, 1]);
    e23[1][1] = mono(r2, &[0, -(n2 - 1)]);
    trans.insert((1, 2), e23);
    TermBundle { rank: 2, labels: vec!["O(-L)".into(), "O(-C1-C2)".into()], trans }
}
