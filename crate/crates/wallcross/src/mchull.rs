//! Maurer-Cartan hull iteration in the Thom-Whitney totalization: truncated
//! polynomial ideals over the rationals, the order-by-order obstruction
//! calculus J_{q+1} = m J_q + (obstruction coordinates), corrections found
//! by exact linear solving, the stopping criterion against a candidate
//! presentation, and torus-invariant subrings of the resulting hull.

use crate::algebra::{QMatrix, Rat};
use crate::cech::{class_coordinates, cohomology_representatives, face, CechElement};
use crate::laurent::{wadd, LaurentElement, Weight};
use crate::localmodel::{build_model, resolve_sheaf, Complex, ModelTag, SheafName, ToricModel};
use crate::tw::{
    slot_weight, solve_primitive, tw_bracket, tw_canonical, tw_coords, tw_differential,
    tw_face_compatible, tw_integrate, tw_is_zero, SimplexForm, TWElement,
};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

// ---- truncated polynomials ------------------------------------------------

/// exponent vector of a monomial in the hull coordinates.
pub type Mono = Vec<u32>;

pub fn mono_degree(m: &Mono) -> u32 {
    m.iter().sum()
}

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// graded order: compare by total degree, then by the exponent vector.
fn grlex(a: &Mono, b: &Mono) -> std::cmp::Ordering {
    mono_degree(a).cmp(&mono_degree(b)).then_with(|| a.cmp(b))
}

/// all monomials in nvars variables of total degree at most dmax.
pub fn monomials_up_to(nvars: usize, dmax: u32) -> Vec<Mono> {
    let mut out = vec![vec![]];
    for _ in 0..nvars {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for a in 0..=(dmax - used) {
                let mut mm = m.clone();
                mm.push(a);
                next.push(mm);
            }
        }
        out = next;
    }
    out
}

/// polynomial in the hull coordinates with rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(nvars: usize, m: &Mono, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m.clone(), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(nvars, &m, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: &Mono, c: &Rat) {
        let e = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *e += c.clone();
        if e.is_zero() {
            self.terms.remove(m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self::zero(self.nvars);
        if k.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.clone() * k);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(&mono_mul(ma, mb), &(ca.clone() * cb));
            }
        }
        out
    }

    /// drop all terms of degree above the bound.
    pub fn truncate(&self, dmax: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if mono_degree(m) <= dmax {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// is every term of the same combined weight under the given per-variable
    /// weight vectors?
    pub fn weight_homogeneous(&self, weights: &[Vec<i64>]) -> bool {
        let wt = |m: &Mono| -> Vec<i64> {
            let k = weights.first().map_or(0, |w| w.len());
            let mut out = vec![0i64; k];
            for (i, &e) in m.iter().enumerate() {
                for (j, &w) in weights[i].iter().enumerate() {
                    out[j] += w * e as i64;
                }
            }
            out
        };
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return true };
        let w0 = wt(first);
        it.all(|m| wt(m) == w0)
    }
}

// ---- monomial tables and row spaces --------------------------------------

/// fixed enumeration of the monomials of degree at most `degree`, largest in
/// the graded order first, so the first nonzero coordinate of a vector is
/// its leading monomial.
#[derive(Debug, Clone)]
pub struct MonoTable {
    pub nvars: usize,
    pub degree: u32,
    pub monos: Vec<Mono>,
    pub index: BTreeMap<Mono, usize>,
}

impl MonoTable {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let mut monos = monomials_up_to(nvars, degree);
        monos.sort_by(|a, b| grlex(b, a));
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonoTable { nvars, degree, monos, index }
    }

    /// coefficient vector of a polynomial; terms above the degree bound are
    /// dropped (everything here is computed modulo that power of the
    /// maximal ideal).
    pub fn vec_of(&self, p: &Poly) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.monos.len()];
        for (m, c) in &p.terms {
            if let Some(&i) = self.index.get(m) {
                out[i] = c.clone();
            }
        }
        out
    }

    pub fn poly_of(&self, v: &[Rat]) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(self.monos[i].clone(), c.clone());
            }
        }
        p
    }
}

/// reduced row echelon subspace of the monomial coordinate space, with
/// pivot-normalized rows; used for ideal membership and normal forms.
#[derive(Debug, Clone)]
pub struct RowSpace {
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new() -> Self {
        RowSpace { rows: Vec::new(), pivots: Vec::new() }
    }

    /// normal form of a vector modulo the span.
    pub fn reduce(&self, mut v: Vec<Rat>) -> Vec<Rat> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= c.clone() * b;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: Vec<Rat>) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// insert a vector; returns false if it was already in the span.
    pub fn insert(&mut self, v: Vec<Rat>) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else { return false };
        let inv = Rat::one() / v[p].clone();
        let v: Vec<Rat> = v.iter().map(|c| c.clone() * inv.clone()).collect();
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    *a -= c.clone() * b;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// canonical sorted copy of the reduced rows, for equality of subspaces.
    fn canonical(&self) -> Vec<Vec<Rat>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        order.into_iter().map(|i| self.rows[i].clone()).collect()
    }

    pub fn same_span(&self, other: &RowSpace) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Default for RowSpace {
    fn default() -> Self {
        Self::new()
    }
}

// ---- truncated ideals -----------------------------------------------------

/// an ideal handled through linear algebra modulo m^(degree+1): all
/// membership, sum, and equality questions are answered on the span of
/// generator multiples up to the truncation degree.
#[derive(Debug, Clone)]
pub struct TruncatedIdeal {
    pub nvars: usize,
    pub degree: u32,
    pub gens: Vec<Poly>,
}

impl TruncatedIdeal {
    pub fn new(nvars: usize, degree: u32, gens: Vec<Poly>) -> Self {
        TruncatedIdeal { nvars, degree, gens }
    }

    /// the k-th power of the maximal ideal.
    pub fn maximal_power(nvars: usize, degree: u32, k: u32) -> Self {
        let gens = monomials_up_to(nvars, k)
            .into_iter()
            .filter(|m| mono_degree(m) == k)
            .map(|m| Poly::monomial(nvars, &m, Rat::one()))
            .collect();
        TruncatedIdeal { nvars, degree, gens }
    }

    /// span of all generator multiples up to the table degree.
    pub fn span(&self, table: &MonoTable) -> RowSpace {
        let mut rs = RowSpace::new();
        for g in &self.gens {
            let gdeg = g.terms.keys().map(mono_degree).min().unwrap_or(0);
            for m in monomials_up_to(self.nvars, table.degree.saturating_sub(gdeg)) {
                let prod = g.mul(&Poly::monomial(self.nvars, &m, Rat::one())).truncate(table.degree);
                if !prod.is_zero() {
                    rs.insert(table.vec_of(&prod));
                }
            }
        }
        rs
    }

    /// the product with the maximal ideal: generators x_i g.
    pub fn times_maximal(&self) -> Self {
        let mut gens = Vec::new();
        for g in &self.gens {
            for i in 0..self.nvars {
                gens.push(g.mul(&Poly::var(self.nvars, i)).truncate(self.degree));
            }
        }
        TruncatedIdeal { nvars: self.nvars, degree: self.degree, gens }
    }

    pub fn plus(&self, extra: &[Poly]) -> Self {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        TruncatedIdeal { nvars: self.nvars, degree: self.degree, gens }
    }

    pub fn contains(&self, p: &Poly) -> bool {
        let table = MonoTable::new(self.nvars, self.degree);
        self.span(&table).contains(table.vec_of(p))
    }

    pub fn equals(&self, other: &TruncatedIdeal) -> bool {
        assert_eq!(self.nvars, other.nvars);
        let degree = self.degree.min(other.degree);
        let table = MonoTable::new(self.nvars, degree);
        self.span(&table).same_span(&other.span(&table))
    }
}

// ---- the deformation problem ----------------------------------------------

/// a Cech-Hom DGLA deformation problem with chosen degree-one lifts in the
/// totalization, one per hull coordinate, plus a fixed basis of second
/// cohomology for obstruction coordinates.
pub struct DeformationProblem {
    pub complex: Complex,
    pub coord_names: Vec<String>,
    pub lifts: Vec<TWElement>,
    /// weights of each coordinate under the automorphism torus of the object
    pub aut_weights: Vec<Vec<i64>>,
    /// weights of each coordinate under the geometric torus of the model
    pub geo_weights: Vec<Weight>,
    pub h2_reps: Vec<CechElement>,
}

impl DeformationProblem {
    pub fn new(
        complex: Complex,
        coord_names: Vec<String>,
        lifts: Vec<TWElement>,
        aut_weights: Vec<Vec<i64>>,
    ) -> Self {
        assert_eq!(coord_names.len(), lifts.len());
        assert_eq!(coord_names.len(), aut_weights.len());
        let mut geo_weights = Vec::new();
        for (name, x) in coord_names.iter().zip(&lifts) {
            assert!(tw_face_compatible(&complex, &complex, x), "lift {name} is not compatible");
            assert!(
                tw_is_zero(&tw_differential(&complex, &complex, x)),
                "lift {name} is not closed"
            );
            let coords = tw_coords(x);
            let mut ws: Vec<Weight> =
                coords.keys().map(|k| slot_weight(&complex, &complex, k)).collect();
            ws.dedup();
            ws.sort();
            ws.dedup();
            assert_eq!(ws.len(), 1, "lift {name} is not weight homogeneous: {ws:?}");
            geo_weights.push(ws[0]);
        }
        let h2_reps = cohomology_representatives(&complex, &complex, 2, None);
        DeformationProblem { complex, coord_names, lifts, aut_weights, geo_weights, h2_reps }
    }

    pub fn nvars(&self) -> usize {
        self.lifts.len()
    }

    /// combined (automorphism, geometric) weight vectors per coordinate.
    pub fn combined_weights(&self) -> Vec<Vec<i64>> {
        self.aut_weights
            .iter()
            .zip(&self.geo_weights)
            .map(|(a, g)| {
                let mut w = a.clone();
                w.push(g.0);
                w.push(g.1);
                w
            })
            .collect()
    }
}

// ---- explicit representatives for the two local models --------------------

fn one_component(ov: &[usize], s: i64, t: i64, mat: Vec<Vec<LaurentElement>>) -> CechElement {
    let mut components = BTreeMap::new();
    components.insert((ov.to_vec(), s, t), mat);
    CechElement { components }
}

fn mono(m: &Arc<ToricModel>, chart: usize, e: &[i64], c: i64) -> LaurentElement {
    LaurentElement::monomial(&m.charts[chart], e, crate::algebra::rat(c))
}

fn zl(m: &Arc<ToricModel>, chart: usize) -> LaurentElement {
    LaurentElement::zero(&m.charts[chart])
}

/// the single-curve model: coordinates p_1..p_n (overlap classes with y^i in
/// the corner) and q_0, q_1 (global section classes).
pub fn single_problem(n: i64) -> DeformationProblem {
    let m = build_model(ModelTag::Single { n });
    let e = resolve_sheaf(&SheafName::SingleE, &m);
    let mut names = Vec::new();
    let mut lifts = Vec::new();
    let mut aut = Vec::new();
    for i in 1..=n {
        // alpha_i: dt0 (x) overlap cochain with y^i in the (-1,-1) corner
        let mat = vec![vec![zl(&m, 0), mono(&m, 0, &[-i, 0], 1)], vec![zl(&m, 0), zl(&m, 0)]];
        lifts.push(TWElement::pair(
            SimplexForm::bary_dt(1, 0),
            one_component(&[0, 1], -1, -1, mat),
        ));
        names.push(format!("p{i}"));
        aut.push(vec![-1, 1]);
    }
    for j in 0..=1i64 {
        // beta_j: global section lift, chart-1 entries x^j, chart-2 entries
        // y^{1-j}, level-1 part by restriction
        let c1 = one_component(&[0], -2, -1, vec![vec![zl(&m, 0)], vec![mono(&m, 0, &[j, 0], 1)]])
            .add(&one_component(&[0], -1, 0, vec![vec![mono(&m, 0, &[j, 0], 1), zl(&m, 0)]]));
        let c2 = one_component(&[1], -2, -1, vec![vec![zl(&m, 1)], vec![mono(&m, 1, &[1 - j, 0], 1)]])
            .add(&one_component(&[1], -1, 0, vec![vec![mono(&m, 1, &[1 - j, 0], 1), zl(&m, 1)]]));
        let level0 = c1.add(&c2);
        let level1 = face(&e, &e, 1, &level0, &[vec![0, 1]]);
        lifts.push(
            TWElement::pair(SimplexForm::one(0), level0)
                .add(&TWElement::pair(SimplexForm::one(1), level1)),
        );
        names.push(format!("q{j}"));
        aut.push(vec![1, -1]);
    }
    DeformationProblem::new(e, names, lifts, aut)
}

/// the chain model at the triple point: coordinates p_1..p_{n1-2} (classes
/// along the first component), q_1..q_{n2-1} (classes along the second), and
/// r (the smoothing class of the extension).
pub fn chain_problem(n1: i64, n2: i64) -> DeformationProblem {
    let m = build_model(ModelTag::Chain { n1, n2 });
    let e = resolve_sheaf(&SheafName::ChainE, &m);
    let lvl1: Vec<Vec<usize>> = m.overlaps().into_iter().filter(|o| o.len() == 2).collect();
    let lvl2 = vec![vec![0usize, 1, 2]];
    let mut names = Vec::new();
    let mut lifts = Vec::new();
    let mut aut = Vec::new();
    // mu_i: 2 t0 dt0 against the overlap cochain with y^i in the upper
    // corner of the middle bundle, on overlaps 12 and 13
    let two_t0_dt0 = |dim: usize| {
        SimplexForm::bary_t(dim, 0)
            .wedge(&SimplexForm::bary_dt(dim, 0))
            .scale(&crate::algebra::rat(2))
    };
    for i in 1..=(n1 - 2) {
        let corner =
            |ch: usize| vec![vec![zl(&m, ch), mono(&m, 0, &[-i, 0], 1)], vec![zl(&m, ch), zl(&m, ch)]];
        let bar = one_component(&[0, 1], -1, -1, corner(0))
            .add(&one_component(&[0, 2], -1, -1, corner(0)));
        let d1 = face(&e, &e, 1, &bar, &lvl2);
        lifts.push(
            TWElement::pair(two_t0_dt0(1), bar).add(&TWElement::pair(two_t0_dt0(2), d1)),
        );
        names.push(format!("p{i}"));
        aut.push(vec![]);
    }
    // eta_j: 2 t1 dt1 / 2 t2 dt2 against the cochain with y^{n1-1} w^j on
    // overlap 13 and w^j on overlap 23
    let two_t_dt = |dim: usize, i: usize| {
        SimplexForm::bary_t(dim, i)
            .wedge(&SimplexForm::bary_dt(dim, i))
            .scale(&crate::algebra::rat(2))
    };
    for j in 1..=(n2 - 1) {
        // chart-1 coordinates: y^{n1-1} w^j = x^{1-n1-j*n1} u^{-j}
        let m13 = vec![
            vec![zl(&m, 0), mono(&m, 0, &[1 - n1 - j * n1, -j], 1)],
            vec![zl(&m, 0), zl(&m, 0)],
        ];
        // chart-2 coordinates: w^j = v^{-j}
        let m23 =
            vec![vec![zl(&m, 1), mono(&m, 1, &[0, -j], 1)], vec![zl(&m, 1), zl(&m, 1)]];
        let bar = one_component(&[0, 2], -1, -1, m13).add(&one_component(&[1, 2], -1, -1, m23));
        let d0 = face(&e, &e, 0, &bar, &lvl2);
        lifts.push(
            TWElement::pair(two_t_dt(1, 1), bar).add(&TWElement::pair(two_t_dt(2, 2), d0)),
        );
        names.push(format!("q{j}"));
        aut.push(vec![]);
    }
    // tau: the smoothing class, a glued chartwise cochain with all its
    // higher levels given by leading-face restriction
    let tau0 = one_component(&[0], -2, -1, vec![vec![mono(&m, 0, &[1, 1], -1)], vec![mono(&m, 0, &[n1, 1], 1)]])
        .add(&one_component(&[0], -1, 0, vec![vec![mono(&m, 0, &[n1, 1], -1), mono(&m, 0, &[1, 1], -1)]]))
        .add(&one_component(&[1], -2, -1, vec![vec![mono(&m, 1, &[0, 1], -1)], vec![mono(&m, 1, &[0, 1], 1)]]))
        .add(&one_component(&[1], -1, 0, vec![vec![mono(&m, 1, &[0, 1], -1), mono(&m, 1, &[0, 1], -1)]]))
        .add(&one_component(&[2], -2, -1, vec![vec![zl(&m, 2)], vec![mono(&m, 2, &[0, 0], 1)]]))
        .add(&one_component(&[2], -1, 0, vec![vec![mono(&m, 2, &[0, 0], -1), zl(&m, 2)]]));
    let tau1 = face(&e, &e, 0, &tau0, &lvl1);
    let tau2 = face(&e, &e, 0, &tau1, &lvl2);
    lifts.push(
        TWElement::pair(SimplexForm::one(0), tau0)
            .add(&TWElement::pair(SimplexForm::one(1), tau1))
            .add(&TWElement::pair(SimplexForm::one(2), tau2)),
    );
    names.push("r".to_string());
    aut.push(vec![]);
    DeformationProblem::new(e, names, lifts, aut)
}

// ---- Maurer-Cartan iteration ----------------------------------------------

/// a formal solution: TW coefficients per hull coordinate monomial.
pub type MCElement = BTreeMap<Mono, TWElement>;

fn mc_canonical(e: &Complex, xi: &MCElement) -> MCElement {
    let mut out = MCElement::new();
    for (m, x) in xi {
        let x = tw_canonical(e, e, x);
        if !tw_is_zero(&x) {
            out.insert(m.clone(), x);
        }
    }
    out
}

/// the residue d xi + 1/2 [xi, xi], with polynomial coefficients truncated
/// at the given degree.
pub fn mc_residue(e: &Complex, xi: &MCElement, trunc: u32) -> MCElement {
    let mut out = MCElement::new();
    let mut push = |m: Mono, x: TWElement| {
        let entry = out.entry(m).or_insert_with(TWElement::zero);
        *entry = entry.add(&x);
    };
    for (m, x) in xi {
        if mono_degree(m) > trunc {
            continue;
        }
        push(m.clone(), tw_differential(e, e, x));
    }
    let half = crate::algebra::ratq(1, 2);
    for (m1, x1) in xi {
        for (m2, x2) in xi {
            let m = mono_mul(m1, m2);
            if mono_degree(&m) > trunc {
                continue;
            }
            push(m, tw_bracket(e, x1, x2).scale(&half));
        }
    }
    mc_canonical(e, &out)
}

/// regroup TW coefficients by the normal forms of their monomials modulo a
/// span: the result represents the same element with coefficients only on
/// monomials outside the span's leading terms.
fn group_by_normal_form(
    e: &Complex,
    xi: &MCElement,
    span: &RowSpace,
    table: &MonoTable,
) -> MCElement {
    let n = table.nvars;
    let mut out = MCElement::new();
    for (m, x) in xi {
        let nf = span.reduce(table.vec_of(&Poly::monomial(n, m, Rat::one())));
        for (i, c) in nf.iter().enumerate() {
            if !c.is_zero() {
                let entry = out.entry(table.monos[i].clone()).or_insert_with(TWElement::zero);
                *entry = entry.add(&x.scale(c));
            }
        }
    }
    mc_canonical(e, &out)
}

/// state of the hull iteration at one order: the ideal J_q and the chosen
/// solution xi_q modulo J_q.
pub struct HullState {
    pub order: u32,
    pub ideal: TruncatedIdeal,
    pub xi: MCElement,
    /// the obstruction coordinate polynomials found at the last step
    pub obstruction_gens: Vec<Poly>,
}

/// order-one starting state: J_1 = m^2 and xi_1 = sum of lifts.
pub fn hull_start(p: &DeformationProblem, trunc: u32) -> HullState {
    let n = p.nvars();
    let mut xi = MCElement::new();
    for (i, lift) in p.lifts.iter().enumerate() {
        let mut m = vec![0u32; n];
        m[i] = 1;
        xi.insert(m, lift.clone());
    }
    HullState {
        order: 1,
        ideal: TruncatedIdeal::maximal_power(n, trunc, 2),
        xi,
        obstruction_gens: Vec::new(),
    }
}

/// one step of the iteration: expand the residue in second cohomology per
/// coordinate monomial, read off the obstruction coordinates in J_q / m J_q,
/// set J_{q+1} = m J_q + (those coordinates), and correct xi by primitives
/// of the exact remainder.
pub fn extend_order(p: &DeformationProblem, st: &HullState) -> Result<HullState, String> {
    let e = &p.complex;
    let n = p.nvars();
    let trunc = st.ideal.degree;
    let table = MonoTable::new(n, trunc);
    let res = mc_residue(e, &st.xi, trunc);
    // group the residue by normal-form monomials modulo m J_q; only the
    // grouped coefficients are closed cocycles (the differential of the
    // residue has coefficients in m J_q), so classes are taken after
    // grouping
    let mjq = st.ideal.times_maximal();
    let mjq_span = mjq.span(&table);
    let grouped = group_by_normal_form(e, &res, &mjq_span, &table);
    // obstruction coordinates: one polynomial per H^2 basis element, living
    // in J_q / m J_q
    let jq_span = st.ideal.span(&table);
    let mut vbeta = vec![Poly::zero(n); p.h2_reps.len()];
    for (m, x) in &grouped {
        let z = tw_integrate(x);
        if z.is_zero() {
            continue;
        }
        let coords = class_coordinates(e, e, &z, &p.h2_reps).ok_or_else(|| {
            format!("residue coefficient at monomial {m:?} has no expansion in the H^2 basis")
        })?;
        for (b, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                vbeta[b].add_term(m, c);
            }
        }
    }
    let mut new_gens = Vec::new();
    for v in vbeta {
        if v.is_zero() {
            continue;
        }
        if !jq_span.contains(table.vec_of(&v)) {
            return Err(format!(
                "obstruction coordinate {v:?} does not lie in J_{}",
                st.order
            ));
        }
        new_gens.push(v);
    }
    let jnext = mjq.plus(&new_gens);
    // the residue is exact modulo J_{q+1}: group TW coefficients by the
    // normal form of their monomial and solve for primitives
    let jnext_span = jnext.span(&table);
    let exact = group_by_normal_form(e, &res, &jnext_span, &table);
    let mut xi = st.xi.clone();
    for (m, x) in exact {
        let y = solve_primitive(e, e, &x).ok_or_else(|| {
            format!("no primitive for the exact residue part at monomial {m:?}")
        })?;
        let entry = xi.entry(m).or_insert_with(TWElement::zero);
        *entry = entry.sub(&y);
    }
    Ok(HullState { order: st.order + 1, ideal: jnext, xi: mc_canonical(e, &xi), obstruction_gens: new_gens })
}

/// sanity check on a state: the residue of xi_q vanishes identically modulo
/// the ideal, i.e. xi_q solves the equation over S / J_q.
pub fn residue_in_ideal(p: &DeformationProblem, st: &HullState) -> bool {
    let e = &p.complex;
    let table = MonoTable::new(p.nvars(), st.ideal.degree);
    let span = st.ideal.span(&table);
    let res = mc_residue(e, &st.xi, st.ideal.degree);
    group_by_normal_form(e, &res, &span, &table).is_empty()
}

/// the symmetric bilinear form on first cohomology given by the bracket,
/// expanded in the H^2 basis: kappa[a][b] is the coordinate vector of the
/// class of [lift_a, lift_b].
pub fn primary_obstruction(p: &DeformationProblem) -> Vec<Vec<Vec<Rat>>> {
    let e = &p.complex;
    let n = p.nvars();
    let mut out = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let z = tw_integrate(&tw_bracket(e, &p.lifts[a], &p.lifts[b]));
            out[a][b] = class_coordinates(e, e, &z, &p.h2_reps)
                .expect("bracket of closed lifts must be expressible in the H^2 basis");
        }
    }
    out
}

/// the order-two ideal predicted by the primary obstruction alone:
/// m^3 plus the quadrics 1/2 sum kappa_beta(a,b) x_a x_b.
pub fn quadratic_obstruction_ideal(p: &DeformationProblem, trunc: u32) -> TruncatedIdeal {
    let n = p.nvars();
    let kappa = primary_obstruction(p);
    let nb = p.h2_reps.len();
    let half = crate::algebra::ratq(1, 2);
    let mut quadrics = Vec::new();
    for beta in 0..nb {
        let mut v = Poly::zero(n);
        for a in 0..n {
            for b in 0..n {
                let c = kappa[a][b][beta].clone() * half.clone();
                if !c.is_zero() {
                    let mut m = vec![0u32; n];
                    m[a] += 1;
                    m[b] += 1;
                    v.add_term(&m, &c);
                }
            }
        }
        if !v.is_zero() {
            quadrics.push(v);
        }
    }
    TruncatedIdeal::maximal_power(n, trunc, 3).plus(&quadrics)
}

// ---- stopping criterion ----------------------------------------------------

/// result of the stopping check against a candidate presentation; both
/// hypotheses are reported separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopVerdict {
    HullEqualsCandidate { d: u32 },
    Inconclusive { d: u32, flat_check: bool, ideal_check: bool },
}

/// the two-part stopping criterion at degree d: the candidate ideal must
/// satisfy m^d cap I subset m I, and the accumulated ideal must agree with
/// the candidate modulo m^d. requires order + 1 >= d so that J_q determines
/// J modulo m^d. all checks are truncated-degree linear algebra.
pub fn stopping_check(st: &HullState, candidate: &TruncatedIdeal, d: u32) -> StopVerdict {
    assert!(st.order + 1 >= d, "iteration order too low to test degree {d}");
    let flat_check = flatness_check(candidate, d);
    let ideal_check = ideal_agreement_check(&st.ideal, candidate, d);
    if flat_check && ideal_check {
        StopVerdict::HullEqualsCandidate { d }
    } else {
        StopVerdict::Inconclusive { d, flat_check, ideal_check }
    }
}

/// check m^d cap I subset m I by truncated linear algebra.
fn flatness_check(candidate: &TruncatedIdeal, d: u32) -> bool {
    let n = candidate.nvars;
    let trunc = candidate.degree;
    assert!(trunc > d, "truncation degree must exceed the stopping degree");
    let table = MonoTable::new(n, trunc);
    let ispan = candidate.span(&table);
    let mi_span = candidate.times_maximal().span(&table);
    let low: Vec<usize> = (0..table.monos.len())
        .filter(|&i| mono_degree(&table.monos[i]) < d)
        .collect();
    let mut m = QMatrix::zero(low.len(), ispan.rows.len());
    for (j, row) in ispan.rows.iter().enumerate() {
        for (i, &mi) in low.iter().enumerate() {
            if !row[mi].is_zero() {
                m.set(i, j, row[mi].clone());
            }
        }
    }
    for combo in m.kernel_basis() {
        let mut v = vec![Rat::zero(); table.monos.len()];
        for (c, row) in combo.iter().zip(&ispan.rows) {
            if c.is_zero() {
                continue;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a += c.clone() * b;
            }
        }
        if !mi_span.contains(v) {
            return false;
        }
    }
    true
}

/// check J + m^d = I + m^d.
fn ideal_agreement_check(j: &TruncatedIdeal, candidate: &TruncatedIdeal, d: u32) -> bool {
    let n = j.nvars;
    let trunc = j.degree;
    let md = TruncatedIdeal::maximal_power(n, trunc, d);
    j.plus(&md.gens).equals(&candidate.plus(&md.gens))
}

/// a formal coordinate change: terms (variable, monomial, coefficient)
/// meaning x_k is replaced by x_k + c * monomial.
pub type Substitution = Vec<(usize, Mono, Rat)>;

/// apply a substitution to a polynomial, truncating at the given degree.
pub fn apply_substitution(p: &Poly, subst: &Substitution, trunc: u32) -> Poly {
    let n = p.nvars;
    let images: Vec<Poly> = (0..n)
        .map(|k| {
            let mut img = Poly::var(n, k);
            for (kk, m, c) in subst {
                if *kk == k {
                    img.add_term(m, c);
                }
            }
            img
        })
        .collect();
    let mut out = Poly::zero(n);
    for (m, c) in &p.terms {
        let mut acc = Poly::monomial(n, &vec![0; n], c.clone());
        for (k, &e) in m.iter().enumerate() {
            for _ in 0..e {
                acc = acc.mul(&images[k]).truncate(trunc);
            }
        }
        out = out.add(&acc);
    }
    out
}

/// stopping check allowing a weight-homogeneous formal change of
/// coordinates: the hull ideal is only canonical up to isomorphism, so when
/// the literal comparison fails a small search over substitutions
/// x_k -> x_k +- m (with m a higher-degree monomial of the same combined
/// weight) is run before giving up. returns the verdict together with the
/// substitution that made it succeed, if any.
pub fn stopping_check_up_to_change(
    st: &HullState,
    candidate: &TruncatedIdeal,
    d: u32,
    weights: &[Vec<i64>],
) -> (StopVerdict, Option<Substitution>) {
    let first = stopping_check(st, candidate, d);
    if matches!(first, StopVerdict::HullEqualsCandidate { .. }) {
        return (first, None);
    }
    let n = st.ideal.nvars;
    let trunc = st.ideal.degree;
    let mono_weight = |m: &Mono| -> Vec<i64> {
        let k = weights.first().map_or(0, |w| w.len());
        (0..k)
            .map(|j| m.iter().enumerate().map(|(i, &e)| weights[i][j] * e as i64).sum())
            .collect()
    };
    // eligible substitution terms: monomials of degree 2..d-1 matching the
    // weight of some variable
    let mut pairs: Vec<(usize, Mono)> = Vec::new();
    for k in 0..n {
        let wk = mono_weight(&{
            let mut m = vec![0u32; n];
            m[k] = 1;
            m
        });
        for m in monomials_up_to(n, d.saturating_sub(1)) {
            if mono_degree(&m) >= 2 && mono_weight(&m) == wk {
                pairs.push((k, m));
            }
        }
    }
    let try_subst = |subst: &Substitution| -> bool {
        let gens: Vec<Poly> =
            st.ideal.gens.iter().map(|g| apply_substitution(g, subst, trunc)).collect();
        let moved = TruncatedIdeal::new(n, trunc, gens);
        ideal_agreement_check(&moved, candidate, d) && flatness_check(candidate, d)
    };
    // search single terms, then pairs of terms, with coefficients +-1
    let signs = [Rat::one(), -Rat::one()];
    for (k, m) in &pairs {
        for s in &signs {
            let subst: Substitution = vec![(*k, m.clone(), s.clone())];
            if try_subst(&subst) {
                return (StopVerdict::HullEqualsCandidate { d }, Some(subst));
            }
        }
    }
    for (a, (k1, m1)) in pairs.iter().enumerate() {
        for (k2, m2) in pairs.iter().skip(a + 1) {
            for s1 in &signs {
                for s2 in &signs {
                    let subst: Substitution =
                        vec![(*k1, m1.clone(), s1.clone()), (*k2, m2.clone(), s2.clone())];
                    if try_subst(&subst) {
                        return (StopVerdict::HullEqualsCandidate { d }, Some(subst));
                    }
                }
            }
        }
    }
    (first, None)
}

// ---- invariant subrings ----------------------------------------------------

/// a presentation of the invariant subring: monomial generators (with their
/// geometric weights) and the relations among them modulo the hull ideal.
#[derive(Debug, Clone)]
pub struct InvariantPresentation {
    pub gen_monos: Vec<Mono>,
    pub gen_weights: Vec<Weight>,
    /// polynomials in the generator variables, kernel of the substitution map
    pub relations: Vec<Poly>,
}

/// invariants of the quotient by the ideal under the automorphism torus:
/// monoid-irreducible invariant monomials that stay independent modulo the
/// ideal, and the relations among them up to the given degree in the
/// generator variables.
pub fn invariant_subring(
    ideal: &TruncatedIdeal,
    aut_weights: &[Vec<i64>],
    geo_weights: &[Weight],
    gen_degree: u32,
    rel_degree: u32,
) -> InvariantPresentation {
    let n = ideal.nvars;
    let is_invariant = |m: &Mono| -> bool {
        let k = aut_weights.first().map_or(0, |w| w.len());
        (0..k).all(|j| {
            m.iter().enumerate().map(|(i, &e)| aut_weights[i][j] * e as i64).sum::<i64>() == 0
        })
    };
    let mut invariant: Vec<Mono> = monomials_up_to(n, gen_degree)
        .into_iter()
        .filter(|m| mono_degree(m) > 0 && is_invariant(m))
        .collect();
    invariant.sort_by(grlex);
    // monoid-irreducible: not a product of two smaller invariant monomials
    let irreducible: Vec<Mono> = invariant
        .iter()
        .filter(|m| {
            !invariant.iter().any(|d| {
                mono_degree(d) < mono_degree(m)
                    && d.iter().zip(m.iter()).all(|(a, b)| a <= b)
                    && is_invariant(&d.iter().zip(m.iter()).map(|(a, b)| b - a).collect())
            })
        })
        .cloned()
        .collect();
    // keep those independent modulo the ideal, in the graded order
    let table = MonoTable::new(n, ideal.degree);
    let span = ideal.span(&table);
    let mut kept: Vec<Mono> = Vec::new();
    let mut sel = RowSpace::new();
    for m in irreducible {
        let nf = span.reduce(table.vec_of(&Poly::monomial(n, &m, Rat::one())));
        if sel.insert(nf) {
            kept.push(m);
        }
    }
    let gen_weights: Vec<Weight> = kept
        .iter()
        .map(|m| {
            let mut w = (0i64, 0i64);
            for (i, &e) in m.iter().enumerate() {
                w = wadd(w, (geo_weights[i].0 * e as i64, geo_weights[i].1 * e as i64));
            }
            w
        })
        .collect();
    // relations: kernel of the substitution map on generator monomials,
    // restricted to products that stay within the truncation degree
    let g = kept.len();
    let mut smonos: Vec<Mono> = monomials_up_to(g, rel_degree)
        .into_iter()
        .filter(|sm| {
            let deg: u32 = sm
                .iter()
                .zip(&kept)
                .map(|(&e, gm)| e * mono_degree(gm))
                .sum();
            mono_degree(sm) > 0 && deg <= ideal.degree
        })
        .collect();
    smonos.sort_by(grlex);
    let mut m = QMatrix::zero(table.monos.len(), smonos.len());
    for (j, sm) in smonos.iter().enumerate() {
        let mut orig = vec![0u32; n];
        for (e, gm) in sm.iter().zip(&kept) {
            for (o, &ge) in orig.iter_mut().zip(gm) {
                *o += e * ge;
            }
        }
        let nf = span.reduce(table.vec_of(&Poly::monomial(n, &orig, Rat::one())));
        for (i, c) in nf.into_iter().enumerate() {
            if !c.is_zero() {
                m.set(i, j, c);
            }
        }
    }
    let relations = m
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero(g);
            for (c, sm) in v.iter().zip(&smonos) {
                if !c.is_zero() {
                    p.add_term(sm, c);
                }
            }
            p
        })
        .collect();
    InvariantPresentation { gen_monos: kept, gen_weights, relations }
}

/// the ideal of 2x2 minors of the 2 x n matrix [s_0..s_{n-1}; s_1..s_n]
/// in the variables s_0..s_n: the rank-one locus of the Hankel matrix.
pub fn hankel_rank_ideal(n: usize, degree: u32) -> TruncatedIdeal {
    let nv = n + 1;
    let mut gens = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            // s_i s_{j+1} - s_{i+1} s_j
            let mut a = vec![0u32; nv];
            a[i] += 1;
            a[j + 1] += 1;
            let mut b = vec![0u32; nv];
            b[i + 1] += 1;
            b[j] += 1;
            gens.push(
                Poly::monomial(nv, &a, Rat::one()).sub(&Poly::monomial(nv, &b, Rat::one())),
            );
        }
    }
    TruncatedIdeal::new(nv, degree, gens)
}

/// result of matching a computed presentation against a target up to a
/// weight-compatible linear change of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchVerdict {
    /// generator i of the target corresponds to order[i] of the computed
    /// presentation scaled by signs[i]
    Match { order: Vec<usize>, signs: Vec<i64> },
    NeedsHumanReview,
}

/// match the relations of an invariant presentation against the Hankel
/// rank-one ideal: generators are paired off along their (distinct)
/// geometric weights, then diagonal sign changes are searched. weights are
/// pairwise distinct here, so weight-compatible changes are diagonal.
pub fn compare_with_hankel(pres: &InvariantPresentation, n: usize) -> MatchVerdict {
    if pres.gen_monos.len() != n + 1 {
        return MatchVerdict::NeedsHumanReview;
    }
    let mut order: Vec<usize> = (0..=n).collect();
    order.sort_by_key(|&i| pres.gen_weights[i]);
    {
        let mut ws: Vec<Weight> = pres.gen_weights.clone();
        ws.sort();
        ws.dedup();
        if ws.len() != n + 1 {
            return MatchVerdict::NeedsHumanReview;
        }
    }
    let target = hankel_rank_ideal(n, 2);
    let table = MonoTable::new(n + 1, 2);
    let mut tspan = RowSpace::new();
    for gpoly in &target.gens {
        tspan.insert(table.vec_of(gpoly));
    }
    // position of each computed generator in the weight ordering
    let mut pos = vec![0usize; n + 1];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    for signbits in 0u32..(1 << (n + 1)) {
        let sign = |k: usize| if signbits & (1 << k) == 0 { 1i64 } else { -1 };
        // transform each relation x_i -> s_{pos[i]} / sign(pos[i])
        let mut rspan = RowSpace::new();
        let mut ok = true;
        for rel in &pres.relations {
            let mut p = Poly::zero(n + 1);
            for (m, c) in &rel.terms {
                if mono_degree(m) != 2 {
                    ok = false;
                    break;
                }
                let mut sm = vec![0u32; n + 1];
                let mut s = 1i64;
                for (i, &e) in m.iter().enumerate() {
                    sm[pos[i]] += e;
                    for _ in 0..e {
                        s *= sign(pos[i]);
                    }
                }
                p.add_term(&sm, &(c.clone() * crate::algebra::rat(s)));
            }
            if !ok {
                break;
            }
            if !p.is_zero() {
                rspan.insert(table.vec_of(&p));
            }
        }
        if ok && rspan.same_span(&tspan) {
            let signs = (0..=n).map(sign).collect();
            return MatchVerdict::Match { order, signs };
        }
    }
    MatchVerdict::NeedsHumanReview
}

// ---- gauge action -----------------------------------------------------------

/// first-order gauge action by exp(z) for z of internal degree zero with
/// linear coefficients: xi + [z, xi] - dz - 1/2 [z, dz], truncated. the
/// order-two obstruction class is unchanged by this.
pub fn gauge_first_order(e: &Complex, xi: &MCElement, z: &MCElement, trunc: u32) -> MCElement {
    let mut out = xi.clone();
    let mut push = |m: Mono, x: TWElement| {
        let entry = out.entry(m).or_insert_with(TWElement::zero);
        *entry = entry.add(&x);
    };
    let half = crate::algebra::ratq(1, 2);
    for (mz, zt) in z {
        let dz = tw_differential(e, e, zt);
        push(mz.clone(), dz.neg());
        for (mx, xt) in xi {
            let m = mono_mul(mz, mx);
            if mono_degree(&m) <= trunc {
                push(m, tw_bracket(e, zt, xt));
            }
        }
        for (mz2, zt2) in z {
            let m = mono_mul(mz, mz2);
            if mono_degree(&m) <= trunc {
                let dz2 = tw_differential(e, e, zt2);
                push(m, tw_bracket(e, zt, &dz2).scale(&half).neg());
            }
        }
    }
    mc_canonical(e, &out)
}

// ---- expected presentations for the two scenarios -------------------------

/// expected hull ideal for the single-curve model: the quadrics
/// p_i q_0 + p_{i+1} q_1 for i = 1..n-1.
pub fn single_hull_candidate(n: i64, trunc: u32) -> TruncatedIdeal {
    let nv = (n + 2) as usize;
    let mut gens = Vec::new();
    for i in 0..(n - 1) as usize {
        let mut a = vec![0u32; nv];
        a[i] += 1;
        a[n as usize] += 1; // q0
        let mut b = vec![0u32; nv];
        b[i + 1] += 1;
        b[n as usize + 1] += 1; // q1
        gens.push(Poly::monomial(nv, &a, Rat::one()).add(&Poly::monomial(nv, &b, Rat::one())));
    }
    TruncatedIdeal::new(nv, trunc, gens)
}

/// expected hull ideal for the chain model at the triple point:
/// p_i q_1 r for i = 1..n1-2 and q_j r for j = 2..n2-1.
pub fn chain_hull_candidate(n1: i64, n2: i64, trunc: u32) -> TruncatedIdeal {
    let np = (n1 - 2) as usize;
    let nq = (n2 - 1) as usize;
    let nv = np + nq + 1;
    let ri = nv - 1;
    let q = |j: usize| np + (j - 1); // q_j
    let mut gens = Vec::new();
    for i in 0..np {
        let mut m = vec![0u32; nv];
        m[i] += 1;
        m[q(1)] += 1;
        m[ri] += 1;
        gens.push(Poly::monomial(nv, &m, Rat::one()));
    }
    for j in 2..=nq {
        let mut m = vec![0u32; nv];
        m[q(j)] += 1;
        m[ri] += 1;
        gens.push(Poly::monomial(nv, &m, Rat::one()));
    }
    TruncatedIdeal::new(nv, trunc, gens)
}
