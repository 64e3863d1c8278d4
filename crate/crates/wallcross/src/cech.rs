//! Cech cochains of Hom complexes between bundle complexes on the chart
//! cover: differential, composition, graded bracket, semicosimplicial face
//! maps, and exact Ext dimensions computed weight by weight.
//!
//! a cochain component lives on an overlap U_{i0...ip}, is expressed in the
//! coordinates of chart i0, and is trivialized there; the 0th face map is
//! the only one that needs a change of trivialization.

use crate::algebra::{QMatrix, Rat};
use crate::laurent::{wadd, wneg, LaurentElement, Weight};
use crate::localmodel::{lmat_inverse, lmat_mul, Complex, LMatrix};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// element of the total Cech-Hom complex: components keyed by
/// (overlap, source degree s, target degree t), each a rank_F(t) x rank_E(s)
/// matrix over the overlap ring in chart-i0 coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CechElement {
    pub components: BTreeMap<(Vec<usize>, i64, i64), LMatrix>,
}

impl CechElement {
    pub fn zero() -> Self {
        CechElement { components: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.components
            .values()
            .all(|m| m.iter().all(|row| row.iter().all(|e| e.is_zero())))
    }

    pub fn normalize(mut self) -> Self {
        self.components
            .retain(|_, m| m.iter().any(|row| row.iter().any(|e| !e.is_zero())));
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, m) in &other.components {
            match out.components.get_mut(k) {
                None => {
                    out.components.insert(k.clone(), m.clone());
                }
                Some(cur) => {
                    for (ra, rb) in cur.iter_mut().zip(m) {
                        for (a, b) in ra.iter_mut().zip(rb) {
                            *a = a.add(b);
                        }
                    }
                }
            }
        }
        out.normalize()
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = self.clone();
        for m in out.components.values_mut() {
            for row in m.iter_mut() {
                for e in row.iter_mut() {
                    *e = e.scale(k);
                }
            }
        }
        out.normalize()
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// the common internal degree t - s of all components, if homogeneous.
    pub fn internal_degree(&self) -> Option<i64> {
        let mut it = self.components.keys();
        let (_, s, t) = it.next()?;
        let n = t - s;
        for (_, s, t) in it {
            if t - s != n {
                return None;
            }
        }
        Some(n)
    }

    /// the common overlap level, if homogeneous.
    pub fn level(&self) -> Option<usize> {
        let mut it = self.components.keys();
        let p = it.next()?.0.len() - 1;
        for k in it {
            if k.0.len() - 1 != p {
                return None;
            }
        }
        Some(p)
    }
}

fn zmat_like(e: &Complex, f: &Complex, chart: usize, s: i64, t: i64) -> LMatrix {
    let ring = &e.model.charts[chart];
    vec![vec![LaurentElement::zero(ring); e.rank(s)]; f.rank(t)]
}

/// internal Hom differential d(f) = d_F o f - (-1)^n f o d_E, componentwise
/// over overlaps.
pub fn hom_differential(e: &Complex, f: &Complex, x: &CechElement) -> CechElement {
    let mut out: BTreeMap<(Vec<usize>, i64, i64), LMatrix> = BTreeMap::new();
    for ((overlap, s, t), m) in &x.components {
        let i0 = overlap[0];
        let n = t - s;
        let sign = if n % 2 == 0 { Rat::one() } else { -Rat::one() };
        // d_F^t o f : contributes to (s, t+1)
        if f.terms.contains_key(&(t + 1)) {
            if let Some(df) = f.diffs.get(t) {
                let term = lmat_mul(&df[i0], m);
                accumulate(&mut out, (overlap.clone(), *s, t + 1), term, &Rat::one(), e, f, i0);
            }
        }
        // - (-1)^n f o d_E^{s-1} : contributes to (s-1, t)
        if e.terms.contains_key(&(s - 1)) {
            if let Some(de) = e.diffs.get(&(s - 1)) {
                let term = lmat_mul(m, &de[i0]);
                accumulate(&mut out, (overlap.clone(), s - 1, *t), term, &-sign, e, f, i0);
            }
        }
    }
    CechElement { components: out }.normalize()
}

fn accumulate(
    out: &mut BTreeMap<(Vec<usize>, i64, i64), LMatrix>,
    key: (Vec<usize>, i64, i64),
    m: LMatrix,
    scale: &Rat,
    e: &Complex,
    f: &Complex,
    chart: usize,
) {
    let entry = out
        .entry(key.clone())
        .or_insert_with(|| zmat_like(e, f, chart, key.1, key.2));
    for (ra, rb) in entry.iter_mut().zip(&m) {
        for (a, b) in ra.iter_mut().zip(rb) {
            *a = a.add(&b.scale(scale));
        }
    }
}

/// k-th semicosimplicial face map: reindex a level-(p-1) element to level p
/// by dropping the k-th chart of each target overlap. dropping the leading
/// chart re-expresses coordinates and re-trivializes.
pub fn face(e: &Complex, f: &Complex, k: usize, x: &CechElement, target_overlaps: &[Vec<usize>]) -> CechElement {
    let model = &e.model;
    let mut out = BTreeMap::new();
    for target in target_overlaps {
        let p = target.len() - 1;
        assert!(k <= p, "face index out of range");
        let mut source: Vec<usize> = target.clone();
        source.remove(k);
        for ((ov, s, t), m) in &x.components {
            if ov != &source {
                continue;
            }
            let mat = if k == 0 {
                // re-express from chart source[0] = target[1] to target[0],
                // and re-trivialize: h_{i0} = (eF_{i0,i1})^{-1} h_{i1} eE_{i0,i1}
                let (i0, i1) = (target[0], target[1]);
                let moved = model.transport_mat(m, i1, i0);
                let ef = &f.terms[t].trans[&(i0, i1)];
                let ee = &e.terms[s].trans[&(i0, i1)];
                let ef_inv = lmat_inverse(ef, &model.charts[i0]);
                lmat_mul(&lmat_mul(&ef_inv, &moved), ee)
            } else {
                m.clone()
            };
            out.insert((target.clone(), *s, *t), mat);
        }
    }
    CechElement { components: out }.normalize()
}

/// Cech differential: alternating sum of faces, level p -> p+1.
pub fn cech_differential(e: &Complex, f: &Complex, x: &CechElement) -> CechElement {
    let model = &e.model;
    let all = model.overlaps();
    let mut out = CechElement::zero();
    // group target overlaps by level = source level + 1
    let Some(p) = x.level() else { return out };
    let targets: Vec<Vec<usize>> = all.into_iter().filter(|o| o.len() == p + 2).collect();
    for k in 0..=(p + 1) {
        let fk = face(e, f, k, x, &targets);
        let signed = if k % 2 == 0 { fk } else { fk.neg() };
        out = out.add(&signed);
    }
    out
}

/// total differential of the Cech-Hom double complex:
/// D = cech + (-1)^p d_internal on level p.
pub fn total_differential(e: &Complex, f: &Complex, x: &CechElement) -> CechElement {
    let mut out = CechElement::zero();
    // split by level for the sign
    let mut by_level: BTreeMap<usize, CechElement> = BTreeMap::new();
    for (k, m) in &x.components {
        by_level
            .entry(k.0.len() - 1)
            .or_insert_with(CechElement::zero)
            .components
            .insert(k.clone(), m.clone());
    }
    for (p, xp) in by_level {
        out = out.add(&cech_differential(e, f, &xp));
        let internal = hom_differential(e, f, &xp);
        out = out.add(&if p % 2 == 0 { internal } else { internal.neg() });
    }
    out
}

/// pointwise composition Hom(F,G) x Hom(E,F) -> Hom(E,G), no extra signs.
pub fn compose(e: &Complex, _f: &Complex, g: &Complex, x: &CechElement, y: &CechElement) -> CechElement {
    let mut out: BTreeMap<(Vec<usize>, i64, i64), LMatrix> = BTreeMap::new();
    for ((ov_x, m_deg, t), mx) in &x.components {
        for ((ov_y, s, m2), my) in &y.components {
            if ov_x != ov_y || m_deg != m2 {
                continue;
            }
            let prod = lmat_mul(mx, my);
            accumulate(&mut out, (ov_x.clone(), *s, *t), prod, &Rat::one(), e, g, ov_x[0]);
        }
    }
    CechElement { components: out }.normalize()
}

/// graded commutator on Hom(E,E):
/// [f, g] = f o g - (-1)^{mn} g o f for internal degrees m, n.
pub fn bracket(e: &Complex, x: &CechElement, y: &CechElement) -> CechElement {
    let m = x.internal_degree().unwrap_or(0);
    let n = y.internal_degree().unwrap_or(0);
    let xy = compose(e, e, e, x, y);
    let yx = compose(e, e, e, y, x);
    let sign = if (m * n) % 2 == 0 { Rat::one() } else { -Rat::one() };
    xy.sub(&yx.scale(&sign))
}

/// identity endomorphism cochain at level 0.
pub fn identity_cochain(e: &Complex) -> CechElement {
    let model = &e.model;
    let mut components = BTreeMap::new();
    for i in 0..model.ncharts() {
        for (&s, term) in &e.terms {
            let ring = &model.charts[i];
            let mut m = vec![vec![LaurentElement::zero(ring); term.rank]; term.rank];
            for d in 0..term.rank {
                m[d][d] = LaurentElement::one(ring);
            }
            components.insert((vec![i], s, s), m);
        }
    }
    CechElement { components }
}

// ---- weight-by-weight cohomology ----------------------------------------

/// one coordinate slot of the weight-w piece of the total complex.
pub type SlotKey = (Vec<usize>, i64, i64, usize, usize);

#[derive(Debug, Clone)]
pub struct WeightSlots {
    pub weight: Weight,
    /// per total degree k: the slots and their unique monomial exponents
    pub by_degree: BTreeMap<i64, Vec<(SlotKey, Vec<i64>)>>,
}

/// enumerate the weight-w slots of the total complex of Hom(E, F).
pub fn slots_for_weight(e: &Complex, f: &Complex, w: Weight) -> WeightSlots {
    let model = &e.model;
    let mut by_degree: BTreeMap<i64, Vec<(SlotKey, Vec<i64>)>> = BTreeMap::new();
    for overlap in model.overlaps() {
        let p = (overlap.len() - 1) as i64;
        let i0 = overlap[0];
        let ring = &model.charts[i0];
        let noninv = model.noninvertible_vars(&overlap);
        for (&s, te) in &e.terms {
            for (&t, tf) in &f.terms {
                let k = p + t - s;
                for a in 0..tf.rank {
                    for b in 0..te.rank {
                        let lam_f = f.lambda[&(t, i0)][a];
                        let lam_e = e.lambda[&(s, i0)][b];
                        let needed = wadd(wadd(w, wneg(lam_f)), lam_e);
                        let Some(exps) = ring.exps_of_weight(needed) else { continue };
                        if noninv.iter().any(|&vi| exps[vi] < 0) {
                            continue;
                        }
                        by_degree
                            .entry(k)
                            .or_default()
                            .push(((overlap.clone(), s, t, a, b), exps));
                    }
                }
            }
        }
    }
    WeightSlots { weight: w, by_degree }
}

/// expand a CechElement in the slot basis for one total degree.
/// panics if the element has a term outside the slot list (that would mean
/// a weight bookkeeping bug).
pub fn expand_in_slots(x: &CechElement, slots: &[(SlotKey, Vec<i64>)]) -> Vec<Rat> {
    let mut index: BTreeMap<&SlotKey, usize> = BTreeMap::new();
    for (i, (k, _)) in slots.iter().enumerate() {
        index.insert(k, i);
    }
    let mut out = vec![Rat::zero(); slots.len()];
    for ((ov, s, t), m) in &x.components {
        for (a, row) in m.iter().enumerate() {
            for (b, entry) in row.iter().enumerate() {
                for (exps, c) in &entry.terms {
                    let key = (ov.clone(), *s, *t, a, b);
                    let i = *index
                        .get(&key)
                        .unwrap_or_else(|| panic!("term outside slot basis: {key:?} exps {exps:?}"));
                    assert_eq!(&slots[i].1, exps, "weight bookkeeping mismatch");
                    out[i] += c.clone();
                }
            }
        }
    }
    out
}

/// build the unit cochain for one slot.
pub fn slot_cochain(e: &Complex, f: &Complex, slot: &(SlotKey, Vec<i64>)) -> CechElement {
    let ((ov, s, t, a, b), exps) = slot;
    let i0 = ov[0];
    let mut m = zmat_like(e, f, i0, *s, *t);
    m[*a][*b] = LaurentElement::monomial(&e.model.charts[i0], exps, Rat::one());
    let mut components = BTreeMap::new();
    components.insert((ov.clone(), *s, *t), m);
    CechElement { components }
}

/// the matrix of the total differential from degree k to k+1 at one weight.
pub fn weight_differential_matrix(e: &Complex, f: &Complex, ws: &WeightSlots, k: i64) -> QMatrix {
    let empty = Vec::new();
    let src = ws.by_degree.get(&k).unwrap_or(&empty);
    let tgt = ws.by_degree.get(&(k + 1)).unwrap_or(&empty);
    let mut m = QMatrix::zero(tgt.len(), src.len());
    for (j, slot) in src.iter().enumerate() {
        let image = total_differential(e, f, &slot_cochain(e, f, slot));
        let col = expand_in_slots(&image, tgt);
        for (i, v) in col.into_iter().enumerate() {
            if !v.is_zero() {
                m.set(i, j, v);
            }
        }
    }
    m
}

#[derive(Debug, Clone)]
pub struct WindowInfo {
    pub lo: Weight,
    pub hi: Weight,
    pub enlargements: usize,
}

/// the default weight window: bounding box of all equivariant weight
/// differences between F and E bases, expanded by the margin.
pub fn default_window(e: &Complex, f: &Complex, margin: i64) -> (Weight, Weight) {
    let mut lo = (i64::MAX, i64::MAX);
    let mut hi = (i64::MIN, i64::MIN);
    for ((_, _), lf) in &f.lambda {
        for wf in lf {
            for ((_, _), le) in &e.lambda {
                for we in le {
                    let d = wadd(*wf, wneg(*we));
                    lo = (lo.0.min(d.0), lo.1.min(d.1));
                    hi = (hi.0.max(d.0), hi.1.max(d.1));
                }
            }
        }
    }
    ((lo.0 - margin, lo.1 - margin), (hi.0 + margin, hi.1 + margin))
}

fn model_margin(e: &Complex) -> i64 {
    match e.model.tag {
        crate::localmodel::ModelTag::Single { n } => 2 * n,
        crate::localmodel::ModelTag::Chain { n1, n2 } => 2 * n1.max(n2),
    }
}

/// cohomology dimensions per weight at one weight.
fn weight_cohomology_dims(e: &Complex, f: &Complex, w: Weight) -> BTreeMap<i64, usize> {
    let ws = slots_for_weight(e, f, w);
    let mut dims = BTreeMap::new();
    if ws.by_degree.is_empty() {
        return dims;
    }
    let kmin = *ws.by_degree.keys().min().unwrap();
    let kmax = *ws.by_degree.keys().max().unwrap();
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for k in kmin - 1..=kmax {
        ranks.insert(k, weight_differential_matrix(e, f, &ws, k).rank());
    }
    for k in kmin..=kmax {
        let dim = ws.by_degree.get(&k).map_or(0, |v| v.len());
        let h = dim - ranks[&k] - ranks[&(k - 1)];
        if h > 0 {
            dims.insert(k, h);
        }
    }
    dims
}

/// exact hypercohomology dimensions of the total complex of Hom(E, F),
/// computed weight by weight over a window with boundary-touch enlargement.
pub fn ext_dimensions(e: &Complex, f: &Complex, margin: Option<i64>) -> (BTreeMap<i64, usize>, WindowInfo) {
    let margin = margin.unwrap_or_else(|| model_margin(e));
    let (mut lo, mut hi) = default_window(e, f, margin);
    let mut enlargements = 0;
    loop {
        let mut total: BTreeMap<i64, usize> = BTreeMap::new();
        let mut boundary_touched = false;
        for w1 in lo.0..=hi.0 {
            for w2 in lo.1..=hi.1 {
                let dims = weight_cohomology_dims(e, f, (w1, w2));
                if !dims.is_empty() && (w1 == lo.0 || w1 == hi.0 || w2 == lo.1 || w2 == hi.1) {
                    boundary_touched = true;
                }
                for (k, d) in dims {
                    *total.entry(k).or_insert(0) += d;
                }
            }
        }
        if !boundary_touched {
            return (total, WindowInfo { lo, hi, enlargements });
        }
        assert!(enlargements < 8, "weight window kept growing; giving up at {lo:?}..{hi:?}");
        lo = (lo.0 - 2, lo.1 - 2);
        hi = (hi.0 + 2, hi.1 + 2);
        enlargements += 1;
    }
}

/// monomial coordinate key of a Cech element:
/// (overlap, s, t, row, col, laurent exponents).
pub type CKey = (Vec<usize>, i64, i64, usize, usize, Vec<i64>);

/// expand a Cech element into exact monomial coordinates.
pub fn cech_coords(x: &CechElement) -> BTreeMap<CKey, Rat> {
    let mut out: BTreeMap<CKey, Rat> = BTreeMap::new();
    for ((ov, s, t), m) in &x.components {
        for (a, row) in m.iter().enumerate() {
            for (b, entry) in row.iter().enumerate() {
                for (lexps, c) in &entry.terms {
                    let key = (ov.clone(), *s, *t, a, b, lexps.clone());
                    let e = out.entry(key.clone()).or_insert_with(Rat::zero);
                    *e += c.clone();
                    if e.is_zero() {
                        out.remove(&key);
                    }
                }
            }
        }
    }
    out
}

fn ckey_weight(e: &Complex, f: &Complex, key: &CKey) -> Weight {
    let (ov, s, t, a, b, lexps) = key;
    let i0 = ov[0];
    let mw = e.model.charts[i0].monomial_weight(lexps);
    wadd(wadd(mw, f.lambda[&(*t, i0)][*a]), wneg(e.lambda[&(*s, i0)][*b]))
}

/// express a closed total cocycle as a combination of the given closed
/// representatives modulo coboundaries; returns the coefficients, or None
/// if no such expression exists.
pub fn class_coordinates(
    e: &Complex,
    f: &Complex,
    z: &CechElement,
    reps: &[CechElement],
) -> Option<Vec<Rat>> {
    let zc = cech_coords(z);
    if zc.is_empty() {
        return Some(vec![Rat::zero(); reps.len()]);
    }
    let degree_of = |k: &CKey| (k.0.len() as i64 - 1) + (k.2 - k.1);
    let kz = degree_of(zc.keys().next().unwrap());
    assert!(zc.keys().all(|k| degree_of(k) == kz), "inhomogeneous cocycle");
    let mut weights: std::collections::BTreeSet<Weight> =
        zc.keys().map(|k| ckey_weight(e, f, k)).collect();
    let rep_coords: Vec<BTreeMap<CKey, Rat>> = reps.iter().map(cech_coords).collect();
    for rc in &rep_coords {
        weights.extend(rc.keys().map(|k| ckey_weight(e, f, k)));
    }
    // columns: the representatives, then coboundaries of every degree-(k-1)
    // slot of each relevant weight
    let mut columns: Vec<BTreeMap<CKey, Rat>> = rep_coords;
    for &w in &weights {
        let ws = slots_for_weight(e, f, w);
        if let Some(slots) = ws.by_degree.get(&(kz - 1)) {
            for slot in slots {
                let img = total_differential(e, f, &slot_cochain(e, f, slot));
                let coords = cech_coords(&img);
                if !coords.is_empty() {
                    columns.push(coords);
                }
            }
        }
    }
    let mut keys: std::collections::BTreeSet<CKey> = zc.keys().cloned().collect();
    for c in &columns {
        keys.extend(c.keys().cloned());
    }
    let keys: Vec<CKey> = keys.into_iter().collect();
    let kindex: BTreeMap<&CKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = QMatrix::zero(keys.len(), columns.len());
    for (j, c) in columns.iter().enumerate() {
        for (k, v) in c {
            m.set(kindex[k], j, v.clone());
        }
    }
    let mut rhs = vec![Rat::zero(); keys.len()];
    for (k, v) in &zc {
        rhs[kindex[k]] = v.clone();
    }
    let x = m.solve_linear(&rhs)?;
    Some(x[..reps.len()].to_vec())
}

/// representatives of a basis of H^degree, per weight, deterministic order.
pub fn cohomology_representatives(
    e: &Complex,
    f: &Complex,
    degree: i64,
    margin: Option<i64>,
) -> Vec<CechElement> {
    let margin = margin.unwrap_or_else(|| model_margin(e));
    let (lo, hi) = default_window(e, f, margin);
    let mut reps = Vec::new();
    for w1 in lo.0..=hi.0 {
        for w2 in lo.1..=hi.1 {
            let ws = slots_for_weight(e, f, (w1, w2));
            let empty = Vec::new();
            let slots_k = ws.by_degree.get(&degree).unwrap_or(&empty);
            if slots_k.is_empty() {
                continue;
            }
            let d_k = weight_differential_matrix(e, f, &ws, degree);
            let d_prev = weight_differential_matrix(e, f, &ws, degree - 1);
            let kernel = d_k.kernel_basis();
            // pick kernel vectors independent modulo the image of d_prev
            let mut chosen: Vec<Vec<Rat>> = Vec::new();
            let img_cols: Vec<Vec<Rat>> = (0..d_prev.cols)
                .map(|j| (0..d_prev.rows).map(|i| d_prev.get(i, j)).collect())
                .collect();
            let mut span = img_cols.clone();
            let mut rank = QMatrix::from_columns(&span, slots_k.len()).rank();
            for v in kernel {
                let mut trial = span.clone();
                trial.push(v.clone());
                let r = QMatrix::from_columns(&trial, slots_k.len()).rank();
                if r > rank {
                    rank = r;
                    span = trial;
                    chosen.push(v);
                }
            }
            for v in chosen {
                let mut el = CechElement::zero();
                for (c, slot) in v.iter().zip(slots_k) {
                    if !c.is_zero() {
                        el = el.add(&slot_cochain(e, f, slot).scale(c));
                    }
                }
                reps.push(el);
            }
        }
    }
    reps
}
