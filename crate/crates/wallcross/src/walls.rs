//! numerical chern characters, central charges, wall loci in a deformation
//! slice, chamber enumeration, and moduli-component reports.
//!
//! the ambient surface carries a contraction whose exceptional locus is a
//! collection of rational curves C_1..C_r; the slice deforms the nef class
//! f*eta to f*eta + sum eps_i C_i.  all central charges are evaluated exactly
//! as polynomials in the symbolic slice coordinates eps_i (rendered e1..er),
//! and walls come out as primitive integer linear forms.
//!
//! conventions: ch^beta = ch . exp(-beta), Z = -ch2^beta + (omega^2/2) ch0
//! + i omega.ch1^beta, and a wall between u and the point class v is the
//! vanishing locus of Re Z(u) Im Z(v) - Re Z(v) Im Z(u).  twist offsets k_i
//! are bracketed by k_i - 1 < beta.C_i - C_i^2/2 < k_i; the bracketing errors
//! on a boundary.

use crate::mchull::Poly;
use crate::{rat, QMatrix, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

// ---- intersection data ----------------------------------------------------

/// intersection-theoretic input: the gram matrix of the contracted curves,
/// the pairings of the twist class beta, and the polarization square.
#[derive(Debug, Clone)]
pub struct IntersectionDatum {
    /// number of contracted curves
    pub r: usize,
    /// gram matrix C_i . C_j, symmetric negative definite
    pub gram: Vec<Vec<i64>>,
    /// pairings beta . C_i
    pub beta_curve: Vec<Rat>,
    /// pairing beta . f*eta
    pub beta_eta: Rat,
    /// (f*eta)^2 > 0
    pub eta_sq: Rat,
}

fn det_int(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut det = 0i64;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let term = m[0][j] * det_int(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

impl IntersectionDatum {
    /// validated constructor: symmetric negative-definite gram matrix and a
    /// positive polarization square.  the pullback f*eta pairs to zero with
    /// every contracted curve by construction, so no field records that.
    pub fn new(
        gram: Vec<Vec<i64>>,
        beta_curve: Vec<Rat>,
        beta_eta: Rat,
        eta_sq: Rat,
    ) -> Result<Self, String> {
        let r = gram.len();
        if r == 0 {
            return Err("need at least one contracted curve".into());
        }
        for row in &gram {
            if row.len() != r {
                return Err("gram matrix is not square".into());
            }
        }
        for i in 0..r {
            for j in 0..r {
                if gram[i][j] != gram[j][i] {
                    return Err("gram matrix is not symmetric".into());
                }
            }
        }
        // negative definite: the leading principal minors alternate in sign
        for k in 1..=r {
            let minor: Vec<Vec<i64>> = gram[..k].iter().map(|row| row[..k].to_vec()).collect();
            let d = det_int(&minor);
            let want_positive = k % 2 == 0;
            if (want_positive && d <= 0) || (!want_positive && d >= 0) {
                return Err("gram matrix is not negative definite".into());
            }
        }
        if beta_curve.len() != r {
            return Err("beta pairings must match the curve count".into());
        }
        if eta_sq <= Rat::zero() {
            return Err("(f*eta)^2 must be positive".into());
        }
        Ok(IntersectionDatum { r, gram, beta_curve, beta_eta, eta_sq })
    }

    /// one curve of self-intersection -n with the default twist pairing
    /// beta.C = -(n+1)/2, so the twist offset brackets to k = 0.
    pub fn single(n: i64) -> Result<Self, String> {
        Self::disjoint(&[n])
    }

    /// disjoint curves of self-intersections -n_i; the default twist class is
    /// sum (1/2 + 1/(2 n_i)) C_i, whose pairings are beta.C_i = -(n_i+1)/2.
    pub fn disjoint(ns: &[i64]) -> Result<Self, String> {
        let r = ns.len();
        for &n in ns {
            if n < 1 {
                return Err("self-intersections must be -n with n >= 1".into());
            }
        }
        let mut gram = vec![vec![0i64; r]; r];
        let mut beta = Vec::new();
        for (i, &n) in ns.iter().enumerate() {
            gram[i][i] = -n;
            beta.push(-Rat::new((n + 1).into(), 2.into()));
        }
        IntersectionDatum::new(gram, beta, Rat::zero(), rat(2))
    }

    /// a chain of two curves meeting at one point.  the default twist
    /// pairings are beta.C_i = -n_i/2 - 3/4: each bracket quantity is -3/4
    /// (offset k_i = 0) and their sum -3/2 clears the chain constraint < -1.
    pub fn chain(n1: i64, n2: i64) -> Result<Self, String> {
        if n1 < 1 || n2 < 1 {
            return Err("self-intersections must be -n with n >= 1".into());
        }
        let gram = vec![vec![-n1, 1], vec![1, -n2]];
        let beta = vec![
            -Rat::new((2 * n1 + 3).into(), 4.into()),
            -Rat::new((2 * n2 + 3).into(), 4.into()),
        ];
        IntersectionDatum::new(gram, beta, Rat::zero(), rat(2))
    }

    /// the positive self-intersection magnitude n_i of curve i.
    pub fn n(&self, i: usize) -> i64 {
        -self.gram[i][i]
    }

    /// true when no two curves meet.
    pub fn is_diagonal(&self) -> bool {
        (0..self.r).all(|i| (0..self.r).all(|j| i == j || self.gram[i][j] == 0))
    }

    /// coordinates of beta on the basis {C_1..C_r, f*eta}, recovered from the
    /// pairings (the gram matrix is invertible, being definite).
    pub fn beta_vector(&self) -> Vec<Rat> {
        let g = self.gram_matrix();
        let mut b = g.solve_linear(&self.beta_curve).expect("definite gram matrix");
        b.push(&self.beta_eta / &self.eta_sq);
        b
    }

    /// the self-intersection beta^2.
    pub fn beta_sq(&self) -> Rat {
        let b = self.beta_vector();
        let mut s = Rat::zero();
        for i in 0..self.r {
            for j in 0..self.r {
                s += &b[i] * &b[j] * rat(self.gram[i][j]);
            }
        }
        s + &b[self.r] * &b[self.r] * &self.eta_sq
    }

    fn gram_matrix(&self) -> QMatrix {
        let rows: Vec<Vec<Rat>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&v| rat(v)).collect())
            .collect();
        QMatrix::from_rows(&rows)
    }

    /// intersection of two ch1 vectors (coordinates on {C_1..C_r, f*eta}).
    pub fn pair_ch1(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for i in 0..self.r {
            for j in 0..self.r {
                s += &a[i] * &b[j] * rat(self.gram[i][j]);
            }
        }
        // f*eta pairs to zero with every curve
        s + &a[self.r] * &b[self.r] * &self.eta_sq
    }

    /// pairing of beta against a ch1 vector, straight from the stored data.
    pub fn pair_beta(&self, a: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for i in 0..self.r {
            s += &a[i] * &self.beta_curve[i];
        }
        s + &a[self.r] * &self.beta_eta
    }

    /// twist offsets k_i bracketed by k_i - 1 < beta.C_i - C_i^2/2 < k_i.
    /// errors when the bracket quantity is an integer (beta on a boundary)
    /// or when a chain pair violates the summed constraint
    /// beta.(C_i + C_j) - (C_i^2 + C_j^2)/2 < k_i + k_j - 1.
    pub fn twist_offsets(&self) -> Result<Vec<i64>, String> {
        let mut qs = Vec::new();
        let mut ks = Vec::new();
        for i in 0..self.r {
            let q = &self.beta_curve[i] - Rat::new(self.gram[i][i].into(), 2.into());
            if q.is_integer() {
                return Err(format!(
                    "beta sits on a wall boundary: beta.C_{} - C^2/2 = {} is an integer",
                    i + 1,
                    q
                ));
            }
            let k = q
                .ceil()
                .to_integer()
                .to_i64()
                .ok_or_else(|| "twist offset overflow".to_string())?;
            qs.push(q);
            ks.push(k);
        }
        for i in 0..self.r {
            for j in (i + 1)..self.r {
                if self.gram[i][j] != 0 {
                    let lhs = &qs[i] + &qs[j];
                    let rhs = rat(ks[i] + ks[j] - 1);
                    if lhs >= rhs {
                        return Err(format!(
                            "beta violates the chain constraint for curves {} and {}",
                            i + 1,
                            j + 1
                        ));
                    }
                }
            }
        }
        Ok(ks)
    }
}

// ---- numerical classes ----------------------------------------------------

/// numerical chern character (ch0, ch1, ch2) with ch1 expressed on the basis
/// {C_1..C_r, f*eta}.
#[derive(Debug, Clone, PartialEq)]
pub struct NumClass {
    pub ch0: i64,
    pub ch1: Vec<Rat>,
    pub ch2: Rat,
}

impl NumClass {
    pub fn zero(r: usize) -> Self {
        NumClass { ch0: 0, ch1: vec![Rat::zero(); r + 1], ch2: Rat::zero() }
    }

    /// the class of a point, (0, 0, 1).
    pub fn point(r: usize) -> Self {
        NumClass { ch0: 0, ch1: vec![Rat::zero(); r + 1], ch2: Rat::one() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ch1.len(), other.ch1.len());
        NumClass {
            ch0: self.ch0 + other.ch0,
            ch1: self.ch1.iter().zip(&other.ch1).map(|(a, b)| a + b).collect(),
            ch2: &self.ch2 + &other.ch2,
        }
    }

    pub fn neg(&self) -> Self {
        NumClass {
            ch0: -self.ch0,
            ch1: self.ch1.iter().map(|a| -a).collect(),
            ch2: -&self.ch2,
        }
    }
}

fn twist_character(v: &NumClass, datum: &IntersectionDatum, sign: i64) -> NumClass {
    let b = datum.beta_vector();
    let s = rat(sign);
    let ch1: Vec<Rat> = v
        .ch1
        .iter()
        .zip(&b)
        .map(|(a, bi)| a - &s * bi * rat(v.ch0))
        .collect();
    let beta_dot_ch1 = datum.pair_beta(&v.ch1);
    let ch2 = &v.ch2 - &s * beta_dot_ch1
        + datum.beta_sq() * Rat::new(v.ch0.into(), 2.into());
    NumClass { ch0: v.ch0, ch1, ch2 }
}

/// the twisted character ch^beta = ch . exp(-beta).
pub fn ch_beta(v: &NumClass, datum: &IntersectionDatum) -> NumClass {
    twist_character(v, datum, 1)
}

/// the inverse twist ch . exp(+beta); composing with ch_beta is the identity.
pub fn ch_beta_inverse(v: &NumClass, datum: &IntersectionDatum) -> NumClass {
    twist_character(v, datum, -1)
}

// ---- objects supported on the exceptional curves --------------------------

/// a line bundle on one curve or on the two-curve chain, optionally shifted
/// by [1] (which negates the character).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectSpec {
    OnCurve { index: usize, twist: i64, shifted: bool },
    OnChain { t1: i64, t2: i64, shifted: bool },
    Point,
}

impl ObjectSpec {
    /// display name; with a single curve the index is dropped ("O_C").
    pub fn render(&self, r: usize) -> String {
        match self {
            ObjectSpec::Point => "O_x".to_string(),
            ObjectSpec::OnCurve { index, twist, shifted } => {
                let base = if r == 1 {
                    "O_C".to_string()
                } else {
                    format!("O_{{C{}}}", index + 1)
                };
                let tw = if *twist == 0 { String::new() } else { format!("({})", twist) };
                let sh = if *shifted { "[1]" } else { "" };
                format!("{base}{tw}{sh}")
            }
            ObjectSpec::OnChain { t1, t2, shifted } => {
                let sh = if *shifted { "[1]" } else { "" };
                format!("O_{{C12}}({},{}){}", t1, t2, sh)
            }
        }
    }
}

/// chern character of a curve object.  the structure sequence
/// 0 -> O_S(-C) -> O_S -> O_C -> 0 gives ch(O_C(k)) = (0, C, k - C^2/2),
/// and on the chain ch(O_C12(t1,t2)) = (0, C1+C2, t1+t2 - (C1+C2)^2/2).
pub fn ch_of_curve_object(spec: &ObjectSpec, datum: &IntersectionDatum) -> NumClass {
    let r = datum.r;
    let v = match spec {
        ObjectSpec::Point => NumClass::point(r),
        ObjectSpec::OnCurve { index, twist, .. } => {
            assert!(*index < r, "curve index out of range");
            let mut ch1 = vec![Rat::zero(); r + 1];
            ch1[*index] = Rat::one();
            let ch2 = rat(*twist) - Rat::new(datum.gram[*index][*index].into(), 2.into());
            NumClass { ch0: 0, ch1, ch2 }
        }
        ObjectSpec::OnChain { t1, t2, .. } => {
            assert_eq!(r, 2, "chain objects need exactly two curves");
            assert_eq!(datum.gram[0][1], 1, "chain objects need intersecting curves");
            let mut ch1 = vec![Rat::zero(); r + 1];
            ch1[0] = Rat::one();
            ch1[1] = Rat::one();
            let sq = datum.gram[0][0] + 2 * datum.gram[0][1] + datum.gram[1][1];
            let ch2 = rat(t1 + t2) - Rat::new(sq.into(), 2.into());
            NumClass { ch0: 0, ch1, ch2 }
        }
    };
    let shifted = matches!(
        spec,
        ObjectSpec::OnCurve { shifted: true, .. } | ObjectSpec::OnChain { shifted: true, .. }
    );
    if shifted {
        v.neg()
    } else {
        v
    }
}

// ---- central charges ------------------------------------------------------

/// Z(v) = -ch2^beta + (omega^2/2) ch0 + i omega.ch1^beta with
/// omega = f*eta + sum eps_i C_i, returned as exact polynomials (re, im) in
/// the slice coordinates eps_1..eps_r.
pub fn central_charge(v: &NumClass, datum: &IntersectionDatum) -> (Poly, Poly) {
    let r = datum.r;
    let vb = ch_beta(v, datum);
    // omega^2 = (f*eta)^2 + sum_ij gram_ij eps_i eps_j
    let mut omega_sq = Poly::monomial(r, &vec![0; r], datum.eta_sq.clone());
    for i in 0..r {
        for j in 0..r {
            let mut m = vec![0u32; r];
            m[i] += 1;
            m[j] += 1;
            omega_sq.add_term(&m, &rat(datum.gram[i][j]));
        }
    }
    let re = Poly::monomial(r, &vec![0; r], -vb.ch2.clone())
        .add(&omega_sq.scale(&Rat::new(v.ch0.into(), 2.into())));
    // omega . ch1^beta: the curves pair through the gram matrix, f*eta only
    // through its own square
    let mut im = Poly::monomial(r, &vec![0; r], &vb.ch1[r] * &datum.eta_sq);
    for i in 0..r {
        let mut c = Rat::zero();
        for j in 0..r {
            c += rat(datum.gram[i][j]) * &vb.ch1[j];
        }
        let mut m = vec![0u32; r];
        m[i] = 1;
        im.add_term(&m, &c);
    }
    (re, im)
}

/// scale a polynomial to primitive integer coefficients with the first term
/// (in the monomial order) positive.
pub fn normalize_primitive(p: &Poly) -> Poly {
    assert!(!p.is_zero(), "cannot normalize the zero polynomial");
    let mut denom_lcm = BigInt::one();
    for c in p.terms.values() {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut numer_gcd = BigInt::zero();
    for c in p.terms.values() {
        numer_gcd = numer_gcd.gcd(&(c * Rat::from_integer(denom_lcm.clone())).to_integer());
    }
    let mut scale = Rat::new(denom_lcm, numer_gcd);
    // leading term: highest exponent vector, so e1 comes before e2
    let first = p.terms.values().next_back().unwrap();
    if (first * &scale).is_negative() {
        scale = -scale;
    }
    p.scale(&scale)
}

/// the wall between u and v in the slice: the primitive integer form of
/// Re Z(u) Im Z(v) - Re Z(v) Im Z(u).  errors when the locus is identically
/// zero (degenerate pair).
pub fn wall_locus(
    u: &NumClass,
    v: &NumClass,
    datum: &IntersectionDatum,
) -> Result<Poly, String> {
    let (ru, iu) = central_charge(u, datum);
    let (rv, iv) = central_charge(v, datum);
    let p = ru.mul(&iv).sub(&rv.mul(&iu));
    if p.is_zero() {
        return Err("degenerate wall locus: the two charges are proportional".into());
    }
    Ok(normalize_primitive(&p))
}

/// render a polynomial in the slice coordinates, e.g. "3*e1 - e2".
pub fn render_form(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (m, c) in p.terms.iter().rev() {
        let mut vars = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                vars.push(format!("e{}", i + 1));
            }
        }
        let mono = vars.join("*");
        let abs = c.abs();
        let coeff = if abs.is_one() && !mono.is_empty() {
            String::new()
        } else if mono.is_empty() {
            format!("{}", abs)
        } else {
            format!("{}*", abs)
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&coeff);
        out.push_str(&mono);
    }
    out
}

// ---- arrangements ---------------------------------------------------------

/// a wall of the arrangement: its primitive linear form, the destabilizing
/// object, and the complementary stable factors (their characters sum with
/// the destabilizer to the point class).
#[derive(Debug, Clone)]
pub struct Wall {
    pub name: String,
    pub form: Poly,
    pub destabilizer: ObjectSpec,
    pub cofactors: Vec<ObjectSpec>,
}

/// chamber labels: subsets for disjoint curves, cyclic C1..C6 for the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChamberLabel {
    /// the set of walls separating the chamber from the geometric one
    Subset(Vec<usize>),
    /// position in the cyclic order around the chain arrangement, 1-based
    Cyclic(usize),
}

impl std::fmt::Display for ChamberLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChamberLabel::Subset(s) => {
                let inner: Vec<String> = s.iter().map(|i| format!("{}", i + 1)).collect();
                write!(f, "{{{}}}", inner.join(","))
            }
            ChamberLabel::Cyclic(k) => write!(f, "C{}", k),
        }
    }
}

/// an open cell of the complement of the walls.
#[derive(Debug, Clone)]
pub struct Chamber {
    pub label: ChamberLabel,
    /// sign of each wall form on the chamber, in wall order
    pub signs: Vec<i8>,
    /// an interior rational point
    pub representative: Vec<Rat>,
    /// indices of the walls whose closure meets the chamber in codimension 1
    pub bounding_walls: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transversality {
    /// the wall normals are linearly independent
    Transversal,
    /// pairwise transversal lines all through the origin of a plane
    ConcurrentNonTransversal,
}

/// the wall-and-chamber decomposition of the slice around the contraction.
#[derive(Debug, Clone)]
pub struct WallArrangement {
    pub dim: usize,
    pub walls: Vec<Wall>,
    pub chambers: Vec<Chamber>,
    pub transversality: Transversality,
    /// index of the geometric chamber in `chambers`
    pub geometric: usize,
}

/// the linear forms omega.C_i = sum_j gram_ij eps_j; the geometric chamber is
/// exactly where all of them are positive (omega ample near f*eta).
pub fn ample_forms(datum: &IntersectionDatum) -> Vec<Poly> {
    let r = datum.r;
    (0..r)
        .map(|i| {
            let mut p = Poly::zero(r);
            for j in 0..r {
                let mut m = vec![0u32; r];
                m[j] = 1;
                p.add_term(&m, &rat(datum.gram[i][j]));
            }
            p
        })
        .collect()
}

fn eval_poly(p: &Poly, x: &[Rat]) -> Rat {
    let mut s = Rat::zero();
    for (m, c) in &p.terms {
        let mut t = c.clone();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                t *= &x[i];
            }
        }
        s += t;
    }
    s
}

fn sign_of(v: &Rat) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// build the wall-and-chamber decomposition for the datum's scenario:
/// coordinate walls for disjoint curves, three concurrent lines for a chain.
pub fn wall_arrangement(datum: &IntersectionDatum) -> Result<WallArrangement, String> {
    let ks = datum.twist_offsets()?;
    let r = datum.r;
    let point = NumClass::point(r);
    if datum.is_diagonal() {
        let mut walls = Vec::new();
        for i in 0..r {
            let dest = ObjectSpec::OnCurve { index: i, twist: ks[i] - 1, shifted: true };
            let coker = ObjectSpec::OnCurve { index: i, twist: ks[i], shifted: false };
            let form = wall_locus(&ch_of_curve_object(&dest, datum), &point, datum)?;
            walls.push(Wall {
                name: format!("W{}", i + 1),
                form,
                destabilizer: dest,
                cofactors: vec![coker],
            });
        }
        let mut chambers = Vec::new();
        for mask in 0u32..(1u32 << r) {
            let subset: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let rep: Vec<Rat> = (0..r)
                .map(|i| if mask & (1 << i) != 0 { rat(1) } else { rat(-1) })
                .collect();
            let signs: Vec<i8> =
                walls.iter().map(|w| sign_of(&eval_poly(&w.form, &rep))).collect();
            assert!(signs.iter().all(|&s| s != 0));
            chambers.push(Chamber {
                label: ChamberLabel::Subset(subset),
                signs,
                representative: rep,
                bounding_walls: (0..r).collect(),
            });
        }
        return Ok(WallArrangement {
            dim: r,
            walls,
            chambers,
            transversality: Transversality::Transversal,
            geometric: 0,
        });
    }
    if r != 2 || datum.gram[0][1] != 1 {
        return Err("unsupported configuration: need disjoint curves or a two-curve chain".into());
    }
    chain_arrangement(datum, &ks)
}

fn chain_arrangement(datum: &IntersectionDatum, ks: &[i64]) -> Result<WallArrangement, String> {
    let point = NumClass::point(2);
    let d1 = ObjectSpec::OnCurve { index: 0, twist: ks[0] - 1, shifted: true };
    let d2 = ObjectSpec::OnCurve { index: 1, twist: ks[1] - 1, shifted: true };
    let d12 = ObjectSpec::OnChain { t1: ks[0], t2: ks[1], shifted: false };
    let walls = vec![
        Wall {
            name: "W1".into(),
            form: wall_locus(&ch_of_curve_object(&d1, datum), &point, datum)?,
            destabilizer: d1,
            cofactors: vec![d12, d2],
        },
        Wall {
            name: "W2".into(),
            form: wall_locus(&ch_of_curve_object(&d2, datum), &point, datum)?,
            destabilizer: d2,
            cofactors: vec![d12, d1],
        },
        Wall {
            name: "W12".into(),
            form: wall_locus(&ch_of_curve_object(&d12, datum), &point, datum)?,
            destabilizer: d12,
            cofactors: vec![d1, d2],
        },
    ];
    // linear coefficient vectors of the three forms
    let coeffs: Vec<(Rat, Rat)> = walls
        .iter()
        .map(|w| {
            let a = w.form.terms.get(&vec![1, 0]).cloned().unwrap_or_else(Rat::zero);
            let b = w.form.terms.get(&vec![0, 1]).cloned().unwrap_or_else(Rat::zero);
            (a, b)
        })
        .collect();
    for i in 0..3 {
        for j in (i + 1)..3 {
            let det = &coeffs[i].0 * &coeffs[j].1 - &coeffs[i].1 * &coeffs[j].0;
            if det.is_zero() {
                return Err(format!(
                    "degenerate arrangement: walls {} and {} coincide",
                    walls[i].name, walls[j].name
                ));
            }
        }
    }
    // the six boundary rays, sorted counterclockwise from the positive axis
    let mut rays: Vec<((Rat, Rat), usize)> = Vec::new();
    for (i, (a, b)) in coeffs.iter().enumerate() {
        rays.push(((-b.clone(), a.clone()), i));
        rays.push(((b.clone(), -a.clone()), i));
    }
    let half = |v: &(Rat, Rat)| -> u8 {
        if v.1.is_positive() || (v.1.is_zero() && v.0.is_positive()) {
            0
        } else {
            1
        }
    };
    rays.sort_by(|(u, _), (v, _)| {
        half(u).cmp(&half(v)).then_with(|| {
            let cross = &u.0 * &v.1 - &u.1 * &v.0;
            // counterclockwise within a half-plane
            Rat::zero().cmp(&cross)
        })
    });
    // cells between consecutive rays, counterclockwise
    let mut cells = Vec::new();
    for i in 0..6 {
        let (u, wu) = &rays[i];
        let (v, wv) = &rays[(i + 1) % 6];
        let rep = vec![&u.0 + &v.0, &u.1 + &v.1];
        let signs: Vec<i8> =
            walls.iter().map(|w| sign_of(&eval_poly(&w.form, &rep))).collect();
        assert!(signs.iter().all(|&s| s != 0), "representative landed on a wall");
        cells.push(Chamber {
            label: ChamberLabel::Cyclic(0),
            signs,
            representative: rep,
            bounding_walls: vec![*wu, *wv],
        });
    }
    // the geometric cell is where omega pairs positively with both curves
    let amp = ample_forms(datum);
    let geo: Vec<usize> = (0..6)
        .filter(|&i| {
            amp.iter().all(|f| eval_poly(f, &cells[i].representative).is_positive())
        })
        .collect();
    assert_eq!(geo.len(), 1, "expected exactly one geometric chamber");
    let g = geo[0];
    // walk so that the first wall crossed is W1 (index 0)
    let next = (g + 1) % 6;
    let shares_w1 = cells[g]
        .bounding_walls
        .iter()
        .any(|w| *w == 0 && cells[next].bounding_walls.contains(w))
        && cells[g].signs[0] != cells[next].signs[0];
    let dir: i64 = if shares_w1 { 1 } else { -1 };
    let mut chambers = Vec::new();
    for t in 0..6i64 {
        let idx = ((g as i64 + dir * t).rem_euclid(6)) as usize;
        let mut c = cells[idx].clone();
        c.label = ChamberLabel::Cyclic((t + 1) as usize);
        chambers.push(c);
    }
    assert_ne!(
        chambers[0].signs[0], chambers[1].signs[0],
        "C2 must sit across W1 from the geometric chamber"
    );
    Ok(WallArrangement {
        dim: 2,
        walls,
        chambers,
        transversality: Transversality::ConcurrentNonTransversal,
        geometric: 0,
    })
}

// ---- component reports ----------------------------------------------------

/// one irreducible component of a moduli space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub name: String,
    pub dimension: i64,
}

/// a gluing edge: which locus of one component is identified with which
/// locus of another.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gluing {
    pub component_a: String,
    pub component_b: String,
    pub locus_a: String,
    pub locus_b: String,
}

/// strictly-semistable data on a wall adjacent to the chamber.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WallNote {
    pub wall: String,
    pub destabilizer: String,
    pub strictly_semistable: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singularity: Option<String>,
}

/// structured description of the moduli space over one chamber.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub chamber: String,
    pub components: Vec<Component>,
    pub gluings: Vec<Gluing>,
    pub walls: Vec<WallNote>,
}

fn proj_name(k: i64) -> String {
    format!("P^{}", k)
}

fn disjoint_wall_note(datum: &IntersectionDatum, arr: &WallArrangement, i: usize) -> WallNote {
    let r = datum.r;
    let w = &arr.walls[i];
    let dest = w.destabilizer.render(r);
    let coker = w.cofactors[0].render(r);
    WallNote {
        wall: w.name.clone(),
        destabilizer: dest.clone(),
        strictly_semistable: format!("{} (+) {}", coker, dest),
        singularity: Some(format!("1/{}(1,1)", datum.n(i))),
    }
}

fn chain_wall_note(datum: &IntersectionDatum, arr: &WallArrangement, i: usize) -> WallNote {
    let w = &arr.walls[i];
    let dest = w.destabilizer.render(2);
    // the polystable object where all three walls meet: the chain bundle
    // plus the two shifted line bundles
    let d12 = arr.walls[2].destabilizer.render(2);
    let d1 = arr.walls[0].destabilizer.render(2);
    let d2 = arr.walls[1].destabilizer.render(2);
    let singularity = if i < 2 { Some(format!("1/{}(1,1)", datum.n(i))) } else { None };
    WallNote {
        wall: w.name.clone(),
        destabilizer: dest,
        strictly_semistable: format!("{} (+) {} (+) {}", d12, d1, d2),
        singularity,
    }
}

/// the moduli components over a chamber, with gluing edges and on-wall notes.
/// the chain chamber C4 is refused: no description is available for it.
pub fn component_report(
    arr: &WallArrangement,
    datum: &IntersectionDatum,
    label: &ChamberLabel,
) -> Result<ComponentReport, String> {
    let chamber = arr
        .chambers
        .iter()
        .find(|c| &c.label == label)
        .ok_or_else(|| format!("chamber {} is not in the arrangement", label))?;
    let surface = Component { name: "S".into(), dimension: 2 };
    match label {
        ChamberLabel::Subset(set) => {
            let walls: Vec<WallNote> = chamber
                .bounding_walls
                .iter()
                .map(|&i| disjoint_wall_note(datum, arr, i))
                .collect();
            if set.is_empty() {
                return Ok(ComponentReport {
                    chamber: label.to_string(),
                    components: vec![surface],
                    gluings: vec![],
                    walls,
                });
            }
            if datum.r == 1 {
                // one curve: the full trichotomy in the self-intersection
                let n = datum.n(0);
                let (components, gluings) = match n {
                    1 => (vec![Component { name: "T".into(), dimension: 2 }], vec![]),
                    2 => (vec![surface], vec![]),
                    _ => (
                        vec![
                            surface,
                            Component { name: proj_name(n - 1), dimension: n - 1 },
                        ],
                        vec![Gluing {
                            component_a: "S".into(),
                            component_b: proj_name(n - 1),
                            locus_a: "C".into(),
                            locus_b: "rational normal curve".into(),
                        }],
                    ),
                };
                return Ok(ComponentReport {
                    chamber: label.to_string(),
                    components,
                    gluings,
                    walls,
                });
            }
            let mut components = vec![surface];
            let mut gluings = Vec::new();
            for &i in set {
                let n = datum.n(i);
                if n < 3 {
                    return Err(format!(
                        "component report needs n_i >= 3 for disjoint curves (curve {} has n = {})",
                        i + 1,
                        n
                    ));
                }
                components.push(Component { name: proj_name(n - 1), dimension: n - 1 });
                gluings.push(Gluing {
                    component_a: "S".into(),
                    component_b: proj_name(n - 1),
                    locus_a: format!("C{}", i + 1),
                    locus_b: "rational normal curve".into(),
                });
            }
            Ok(ComponentReport {
                chamber: label.to_string(),
                components,
                gluings,
                walls,
            })
        }
        ChamberLabel::Cyclic(t) => {
            let (n1, n2) = (datum.n(0), datum.n(1));
            if n1 < 3 || n2 < 3 {
                return Err("component report needs n1, n2 >= 3 for the chain".into());
            }
            let walls: Vec<WallNote> = chamber
                .bounding_walls
                .iter()
                .map(|&i| chain_wall_note(datum, arr, i))
                .collect();
            // chambers C5, C6 mirror C3, C2 with the two curves exchanged
            let (components, gluings) = match t {
                1 => (vec![surface], vec![]),
                2 | 6 => {
                    let (cn, n) = if *t == 2 { ("C1", n1) } else { ("C2", n2) };
                    (
                        vec![
                            surface,
                            Component { name: proj_name(n - 1), dimension: n - 1 },
                        ],
                        vec![Gluing {
                            component_a: "S".into(),
                            component_b: proj_name(n - 1),
                            locus_a: cn.into(),
                            locus_b: "rational normal curve".into(),
                        }],
                    )
                }
                3 | 5 => {
                    let (na, nb, ca, cb) = if *t == 3 {
                        (n1, n2, "C1", "C2")
                    } else {
                        (n2, n1, "C2", "C1")
                    };
                    let bl = format!("Bl_pt {}", proj_name(na - 1));
                    let big = proj_name(n1 + n2 - 3);
                    (
                        vec![
                            surface,
                            Component { name: bl.clone(), dimension: na - 1 },
                            Component { name: big.clone(), dimension: n1 + n2 - 3 },
                        ],
                        vec![
                            Gluing {
                                component_a: bl.clone(),
                                component_b: big.clone(),
                                locus_a: "exceptional divisor".into(),
                                locus_b: format!("linear {}", proj_name(na - 2)),
                            },
                            Gluing {
                                component_a: "S".into(),
                                component_b: big,
                                locus_a: cb.into(),
                                locus_b: format!(
                                    "rational normal curve in a complementary {}",
                                    proj_name(nb - 1)
                                ),
                            },
                            Gluing {
                                component_a: "S".into(),
                                component_b: bl,
                                locus_a: ca.into(),
                                locus_b: "strict transform of a rational normal curve".into(),
                            },
                        ],
                    )
                }
                4 => {
                    return Err(
                        "chamber C4: no moduli description is available; refusing to guess".into(),
                    )
                }
                _ => return Err(format!("chamber C{} is not in the cyclic range", t)),
            };
            Ok(ComponentReport {
                chamber: label.to_string(),
                components,
                gluings,
                walls,
            })
        }
    }
}
