//! polynomial differential forms on simplices and the Thom-Whitney
//! totalization of the semicosimplicial Hom DGLA: differential, bracket,
//! face-compatibility, integration to the Cech total complex, and exact
//! linear solving for primitives.

use crate::algebra::{QMatrix, Rat};
use crate::cech::{face, hom_differential, slots_for_weight, CechElement};
use crate::laurent::{wadd, wneg, Weight};
use crate::localmodel::Complex;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// polynomial differential form on the standard n-simplex, written in the
/// reduced coordinates t_1..t_n (with t_0 = 1 - sum t_i eliminated).
/// term key: (dt bitmask over t_1..t_n, exponents of t_1..t_n).
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexForm {
    pub dim: usize,
    pub terms: BTreeMap<(u64, Vec<u32>), Rat>,
}

impl SimplexForm {
    pub fn zero(dim: usize) -> Self {
        SimplexForm { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, c: Rat) -> Self {
        let mut f = Self::zero(dim);
        if !c.is_zero() {
            f.terms.insert((0, vec![0; dim]), c);
        }
        f
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, Rat::one())
    }

    /// the barycentric coordinate t_i as a 0-form; t_0 = 1 - sum.
    pub fn bary_t(dim: usize, i: usize) -> Self {
        assert!(i <= dim);
        let mut f = Self::zero(dim);
        if i == 0 {
            f.terms.insert((0, vec![0; dim]), Rat::one());
            for j in 0..dim {
                let mut e = vec![0; dim];
                e[j] = 1;
                f.terms.insert((0, e), -Rat::one());
            }
        } else {
            let mut e = vec![0; dim];
            e[i - 1] = 1;
            f.terms.insert((0, e), Rat::one());
        }
        f
    }

    /// the 1-form dt_i; dt_0 = -sum dt_j.
    pub fn bary_dt(dim: usize, i: usize) -> Self {
        assert!(i <= dim);
        let mut f = Self::zero(dim);
        if i == 0 {
            for j in 0..dim {
                f.terms.insert((1 << j, vec![0; dim]), -Rat::one());
            }
        } else {
            f.terms.insert((1 << (i - 1), vec![0; dim]), Rat::one());
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            let e = out.terms.entry(k.clone()).or_insert_with(Rat::zero);
            *e += c.clone();
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self::zero(self.dim);
        if k.is_zero() {
            return out;
        }
        for (key, c) in &self.terms {
            out.terms.insert(key.clone(), c.clone() * k);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// sign of dt-mask concatenation: count inversions between the two masks.
    fn wedge_sign(a: u64, b: u64) -> i64 {
        let mut inv = 0u32;
        let mut bb = b;
        while bb != 0 {
            let bit = bb.trailing_zeros();
            inv += (a >> (bit + 1)).count_ones();
            bb &= bb - 1;
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for ((ma, ea), ca) in &self.terms {
            for ((mb, eb), cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let sign = Self::wedge_sign(*ma, *mb);
                let mask = ma | mb;
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(p, q)| p + q).collect();
                let c = ca.clone() * cb * Rat::from_integer(BigInt::from(sign));
                let key = (mask, exps);
                let e = out.terms.entry(key.clone()).or_insert_with(Rat::zero);
                *e += c;
                if e.is_zero() {
                    out.terms.remove(&key);
                }
            }
        }
        out
    }

    /// exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((mask, exps), c) in &self.terms {
            for j in 0..self.dim {
                if exps[j] == 0 || mask & (1 << j) != 0 {
                    continue;
                }
                // d contributes a_j t^{a - e_j} dt_j ^ (existing mask);
                // dt_j must move past the lower bits of the mask
                let sign = Self::wedge_sign(1 << j, *mask);
                let mut e = exps.clone();
                e[j] -= 1;
                let coef = c.clone()
                    * Rat::from_integer(BigInt::from(exps[j]))
                    * Rat::from_integer(BigInt::from(sign));
                let entry = out.terms.entry((mask | (1 << j), e.clone())).or_insert_with(Rat::zero);
                *entry += coef;
                if entry.is_zero() {
                    out.terms.remove(&(mask | (1 << j), e));
                }
            }
        }
        out
    }

    /// split into homogeneous form-degree parts.
    pub fn degree_parts(&self) -> BTreeMap<usize, SimplexForm> {
        let mut out: BTreeMap<usize, SimplexForm> = BTreeMap::new();
        for (k, c) in &self.terms {
            let deg = k.0.count_ones() as usize;
            out.entry(deg)
                .or_insert_with(|| SimplexForm::zero(self.dim))
                .terms
                .insert(k.clone(), c.clone());
        }
        out
    }

    /// pullback along the i-th coface (restriction to the face t_i = 0).
    pub fn face_restrict(&self, i: usize) -> SimplexForm {
        assert!(self.dim >= 1 && i <= self.dim);
        let m = self.dim - 1;
        if i >= 1 {
            // t_i = 0, dt_i = 0, renumber higher coordinates down
            let mut out = SimplexForm::zero(m);
            for ((mask, exps), c) in &self.terms {
                if exps[i - 1] > 0 || mask & (1 << (i - 1)) != 0 {
                    continue;
                }
                let mut new_exps = Vec::with_capacity(m);
                let mut new_mask = 0u64;
                let mut pos = 0;
                for j in 0..self.dim {
                    if j == i - 1 {
                        continue;
                    }
                    new_exps.push(exps[j]);
                    if mask & (1 << j) != 0 {
                        new_mask |= 1 << pos;
                    }
                    pos += 1;
                }
                let e = out.terms.entry((new_mask, new_exps.clone())).or_insert_with(Rat::zero);
                *e += c.clone();
                if e.is_zero() {
                    out.terms.remove(&(new_mask, new_exps));
                }
            }
            out
        } else {
            // t_1 -> 1 - sum s_k, t_j -> s_{j-1}; dt likewise
            let t_img: Vec<SimplexForm> = (0..self.dim)
                .map(|j| if j == 0 { SimplexForm::bary_t(m, 0) } else { SimplexForm::bary_t(m, j) })
                .collect();
            let dt_img: Vec<SimplexForm> = (0..self.dim)
                .map(|j| if j == 0 { SimplexForm::bary_dt(m, 0) } else { SimplexForm::bary_dt(m, j) })
                .collect();
            let mut out = SimplexForm::zero(m);
            for ((mask, exps), c) in &self.terms {
                let mut acc = SimplexForm::scalar(m, c.clone());
                for j in 0..self.dim {
                    for _ in 0..exps[j] {
                        acc = acc.wedge(&t_img[j]);
                    }
                }
                for j in 0..self.dim {
                    if mask & (1 << j) != 0 {
                        acc = acc.wedge(&dt_img[j]);
                    }
                }
                out = out.add(&acc);
            }
            out
        }
    }

    /// exact integral of the top-degree part over the standard simplex,
    /// with orientation dt_1 ^ ... ^ dt_n:
    /// integral of prod t_i^{a_i} is prod a_i! / (n + sum a_i)!.
    pub fn top_integral(&self) -> Rat {
        let full: u64 = if self.dim == 0 { 0 } else { (1 << self.dim) - 1 };
        let mut out = Rat::zero();
        for ((mask, exps), c) in &self.terms {
            if *mask != full {
                continue;
            }
            let mut num = BigInt::one();
            let mut total: u64 = self.dim as u64;
            for &a in exps {
                num *= factorial(a as u64);
                total += a as u64;
            }
            out += c.clone() * Rat::from_integer(num) / Rat::from_integer(factorial(total));
        }
        out
    }

    pub fn max_poly_degree(&self) -> u32 {
        self.terms.keys().map(|(_, e)| e.iter().sum()).max().unwrap_or(0)
    }
}

fn factorial(n: u64) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    f
}

// ---- Thom-Whitney elements ----------------------------------------------

/// element of the Thom-Whitney totalization: a sum of form (x) cochain
/// pairs per simplicial level; each cochain is level-homogeneous at the
/// level matching the simplex dimension.
#[derive(Debug, Clone)]
pub struct TWElement {
    pub parts: Vec<(SimplexForm, CechElement)>,
}

impl TWElement {
    pub fn zero() -> Self {
        TWElement { parts: Vec::new() }
    }

    pub fn pair(form: SimplexForm, cochain: CechElement) -> Self {
        if form.is_zero() || cochain.is_zero() {
            return Self::zero();
        }
        // note: the form dimension usually matches the cochain level, but
        // mixed pairs also appear as intermediate compatibility-constraint
        // data (forms on the (n-1)-simplex against level-n cochains)
        TWElement { parts: vec![(form, cochain)] }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        TWElement { parts }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        TWElement {
            parts: self.parts.iter().map(|(f, c)| (f.scale(k), c.clone())).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// key for the monomial coordinates of a TW element:
/// (level, dt mask, t exponents, overlap, s, t, row, col, laurent exponents).
pub type TWKey = (usize, u64, Vec<u32>, Vec<usize>, i64, i64, usize, usize, Vec<i64>);

/// expand a TW element into exact monomial coordinates.
pub fn tw_coords(x: &TWElement) -> BTreeMap<TWKey, Rat> {
    let mut out: BTreeMap<TWKey, Rat> = BTreeMap::new();
    for (form, cochain) in &x.parts {
        for ((fmask, fexps), fc) in &form.terms {
            for ((ov, s, t), mat) in &cochain.components {
                for (a, row) in mat.iter().enumerate() {
                    for (b, entry) in row.iter().enumerate() {
                        for (lexps, lc) in &entry.terms {
                            let key: TWKey = (
                                form.dim,
                                *fmask,
                                fexps.clone(),
                                ov.clone(),
                                *s,
                                *t,
                                a,
                                b,
                                lexps.clone(),
                            );
                            let e = out.entry(key.clone()).or_insert_with(Rat::zero);
                            *e += fc.clone() * lc;
                            if e.is_zero() {
                                out.remove(&key);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// rebuild a TW element from monomial coordinates.
pub fn tw_from_coords(e: &Complex, f: &Complex, coords: &BTreeMap<TWKey, Rat>) -> TWElement {
    let mut out = TWElement::zero();
    for ((dim, fmask, fexps, ov, s, t, a, b, lexps), c) in coords {
        let mut form = SimplexForm::zero(*dim);
        form.terms.insert((*fmask, fexps.clone()), Rat::one());
        let i0 = ov[0];
        let ring = &e.model.charts[i0];
        let mut mat =
            vec![vec![crate::laurent::LaurentElement::zero(ring); e.rank(*s)]; f.rank(*t)];
        mat[*a][*b] = crate::laurent::LaurentElement::monomial(ring, lexps, c.clone());
        let mut components = BTreeMap::new();
        components.insert((ov.clone(), *s, *t), mat);
        out = out.add(&TWElement::pair(form, CechElement { components }));
    }
    out
}

/// collapse to canonical coordinate form.
pub fn tw_canonical(e: &Complex, f: &Complex, x: &TWElement) -> TWElement {
    tw_from_coords(e, f, &tw_coords(x))
}

pub fn tw_is_zero(x: &TWElement) -> bool {
    tw_coords(x).is_empty()
}

pub fn tw_equal(x: &TWElement, y: &TWElement) -> bool {
    tw_is_zero(&x.sub(y))
}

/// total differential: d(omega (x) y) = d omega (x) y + (-1)^{|omega|} omega (x) d y.
pub fn tw_differential(e: &Complex, f: &Complex, x: &TWElement) -> TWElement {
    let mut out = TWElement::zero();
    for (form, cochain) in &x.parts {
        let df = form.d();
        if !df.is_zero() {
            out = out.add(&TWElement::pair(df, cochain.clone()));
        }
        let dc = hom_differential(e, f, cochain);
        if !dc.is_zero() {
            for (deg, part) in form.degree_parts() {
                let signed = if deg % 2 == 0 { part } else { part.neg() };
                out = out.add(&TWElement::pair(signed, dc.clone()));
            }
        }
    }
    out
}

/// bracket: [omega (x) y, omega' (x) y'] =
/// (-1)^{|omega'| |y|} (omega ^ omega') (x) [y, y'], levelwise.
pub fn tw_bracket(e: &Complex, x: &TWElement, y: &TWElement) -> TWElement {
    let mut out = TWElement::zero();
    for (fx, cx) in &x.parts {
        for (fy, cy) in &y.parts {
            if fx.dim != fy.dim {
                continue;
            }
            let br = crate::cech::bracket(e, cx, cy);
            if br.is_zero() {
                continue;
            }
            let m = cx.internal_degree().expect("bracket needs homogeneous cochains");
            for (deg_fy, fy_part) in fy.degree_parts() {
                let wedge = fx.wedge(&fy_part);
                if wedge.is_zero() {
                    continue;
                }
                let signed = if (deg_fy as i64 * m) % 2 == 0 { wedge } else { wedge.neg() };
                out = out.add(&TWElement::pair(signed, br.clone()));
            }
        }
    }
    out
}

/// check the face compatibility conditions that define the totalization:
/// (delta_i^* (x) id) x_n = (id (x) face_i) x_{n-1} for all n >= 1, i <= n.
pub fn tw_face_compatible(e: &Complex, f: &Complex, x: &TWElement) -> bool {
    let model = &e.model;
    let maxlvl = model.ncharts() - 1;
    for n in 1..=maxlvl {
        let targets: Vec<Vec<usize>> =
            model.overlaps().into_iter().filter(|o| o.len() == n + 1).collect();
        for i in 0..=n {
            // both sides live in (forms on the (n-1)-simplex) (x) L_n
            let mut lhs = TWElement::zero();
            let mut rhs = TWElement::zero();
            for (form, cochain) in &x.parts {
                if form.dim == n {
                    let restricted = form.face_restrict(i);
                    if !restricted.is_zero() {
                        lhs.parts.push((restricted, cochain.clone()));
                    }
                } else if form.dim == n - 1 {
                    let moved = face(e, f, i, cochain, &targets);
                    if !moved.is_zero() {
                        rhs.parts.push((form.clone(), moved));
                    }
                }
            }
            if !tw_is_zero(&lhs.sub(&rhs)) {
                return false;
            }
        }
    }
    true
}

/// integration to the Cech total complex: at level n keep the n-form part
/// and integrate it over the standard simplex.
pub fn tw_integrate(x: &TWElement) -> CechElement {
    let mut out = CechElement::zero();
    for (form, cochain) in &x.parts {
        let v = form.top_integral();
        if !v.is_zero() {
            out = out.add(&cochain.scale(&v));
        }
    }
    out
}

// ---- finite-dimensional solving per weight -------------------------------

/// weight of one TW coordinate slot.
pub fn slot_weight(e: &Complex, f: &Complex, key: &TWKey) -> Weight {
    let (_, _, _, ov, s, t, a, b, lexps) = key;
    let i0 = ov[0];
    let mw = e.model.charts[i0].monomial_weight(lexps);
    wadd(wadd(mw, f.lambda[&(*t, i0)][*a]), wneg(e.lambda[&(*s, i0)][*b]))
}

/// basis of the weight-w, total-degree-k part of the totalization with
/// polynomial t-degree at most tmax, as compatible TW elements.
pub fn tw_space_basis(e: &Complex, f: &Complex, w: Weight, k: i64, tmax: u32) -> Vec<TWElement> {
    let model = &e.model;
    let maxlvl = model.ncharts() - 1;
    let ws = slots_for_weight(e, f, w);
    // candidate monomials: (level n, form monomial on the n-simplex of
    // degree q, slot with t - s = k - q)
    let mut candidates: Vec<TWKey> = Vec::new();
    for n in 0..=maxlvl {
        for slots in ws.by_degree.values() {
            for ((ov, s, t, a, b), lexps) in slots {
                if ov.len() != n + 1 {
                    continue;
                }
                let q = k - (t - s);
                if !(0..=n as i64).contains(&q) {
                    continue;
                }
                for mask in 0u64..(1 << n) {
                    if mask.count_ones() as i64 != q {
                        continue;
                    }
                    for texps in monomials_up_to(n, tmax) {
                        candidates.push((
                            n,
                            mask,
                            texps,
                            ov.clone(),
                            *s,
                            *t,
                            *a,
                            *b,
                            lexps.clone(),
                        ));
                    }
                }
            }
        }
    }
    if candidates.is_empty() {
        return Vec::new();
    }
    // compatibility constraints: for each level n >= 1 and face i, the
    // difference of the two sides must vanish coordinate by coordinate
    let mut row_index: BTreeMap<(usize, usize, TWKey), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, Rat)> = Vec::new();
    for (col, key) in candidates.iter().enumerate() {
        let x = tw_from_coords(e, f, &[(key.clone(), Rat::one())].into_iter().collect());
        let (form, cochain) = &x.parts[0];
        let n = form.dim;
        if n >= 1 {
            for i in 0..=n {
                let restricted = form.face_restrict(i);
                if restricted.is_zero() {
                    continue;
                }
                let piece = TWElement::pair(restricted, cochain.clone());
                for (ck, cv) in tw_coords(&piece) {
                    let r = next_row(&mut row_index, (n, i, ck));
                    entries.push((r, col, cv));
                }
            }
        }
        if n + 1 <= maxlvl {
            let targets: Vec<Vec<usize>> =
                model.overlaps().into_iter().filter(|o| o.len() == n + 2).collect();
            for i in 0..=n + 1 {
                let moved = face(e, f, i, cochain, &targets);
                if moved.is_zero() {
                    continue;
                }
                let piece = TWElement::pair(form.clone(), moved);
                for (ck, cv) in tw_coords(&piece) {
                    let r = next_row(&mut row_index, (n + 1, i, ck));
                    entries.push((r, col, -cv));
                }
            }
        }
    }
    let mut m = QMatrix::zero(row_index.len(), candidates.len());
    for (r, c, v) in entries {
        m.add_to(r, c, &v);
    }
    m.kernel_basis()
        .into_iter()
        .map(|v| {
            let coords: BTreeMap<TWKey, Rat> = candidates
                .iter()
                .zip(&v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect();
            tw_from_coords(e, f, &coords)
        })
        .collect()
}

fn next_row(index: &mut BTreeMap<(usize, usize, TWKey), usize>, key: (usize, usize, TWKey)) -> usize {
    let n = index.len();
    *index.entry(key).or_insert(n)
}

fn monomials_up_to(nvars: usize, dmax: u32) -> Vec<Vec<u32>> {
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

/// solve d y = z in the totalization, weight by weight, raising the
/// polynomial t-degree bound until a solution appears (or giving up).
pub fn solve_primitive(e: &Complex, f: &Complex, z: &TWElement) -> Option<TWElement> {
    let zc = tw_coords(z);
    if zc.is_empty() {
        return Some(TWElement::zero());
    }
    // total degree of z: form degree + internal degree, must be homogeneous
    let degree_of = |k: &TWKey| k.1.count_ones() as i64 + (k.5 - k.4);
    let kz = degree_of(zc.keys().next().unwrap());
    assert!(zc.keys().all(|k| degree_of(k) == kz), "inhomogeneous primitive target");
    let weights: BTreeSet<Weight> = zc.keys().map(|k| slot_weight(e, f, k)).collect();
    let mut total = TWElement::zero();
    for w in weights {
        let zw: BTreeMap<TWKey, Rat> = zc
            .iter()
            .filter(|(k, _)| slot_weight(e, f, k) == w)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let ztarget = zw.clone();
        let mut tmax = 3u32;
        let mut solved = false;
        while tmax <= 12 {
            let basis = tw_space_basis(e, f, w, kz - 1, tmax);
            // columns: coordinates of d(b_i); rows: union of keys
            let images: Vec<BTreeMap<TWKey, Rat>> = basis
                .iter()
                .map(|b| tw_coords(&tw_differential(e, f, b)))
                .collect();
            let mut keys: BTreeSet<TWKey> = ztarget.keys().cloned().collect();
            for img in &images {
                keys.extend(img.keys().cloned());
            }
            let keys: Vec<TWKey> = keys.into_iter().collect();
            let kindex: BTreeMap<&TWKey, usize> =
                keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
            let mut m = QMatrix::zero(keys.len(), basis.len());
            for (j, img) in images.iter().enumerate() {
                for (k, v) in img {
                    m.set(kindex[k], j, v.clone());
                }
            }
            let mut rhs = vec![Rat::zero(); keys.len()];
            for (k, v) in &ztarget {
                rhs[kindex[k]] = v.clone();
            }
            if let Some(x) = m.solve_linear(&rhs) {
                for (c, b) in x.iter().zip(&basis) {
                    if !c.is_zero() {
                        total = total.add(&b.scale(c));
                    }
                }
                solved = true;
                break;
            }
            tmax *= 2;
        }
        if !solved {
            return None;
        }
    }
    Some(total)
}

/// expand a closed Cech total cocycle in a list of cohomology classes:
/// returns coefficients if the element is a combination of the given
/// representatives modulo coboundaries (per weight, exact linear algebra).
pub fn tw_cohomology_class(
    e: &Complex,
    f: &Complex,
    cocycle: &CechElement,
    reps: &[CechElement],
) -> Option<Vec<Rat>> {
    crate::cech::class_coordinates(e, f, cocycle, reps)
}
