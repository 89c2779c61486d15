//! Exact polynomial vector-field algebra for the point symmetries of the
//! Gauss-Codazzi system, the commutator tables, and a numerical
//! infinitesimal-invariance check of the generators on lifted solutions.
//!
//! Vector fields live over the six variables (z, zbar, U, H, Q, R) with
//! U = e^u and R playing the conjugate Hopf coefficient; all coefficients are
//! polynomials with exact rational coefficients.

use crate::gauss_codazzi::{AnalyticFields, FieldsPoint};
use crate::numerics::convergence_order;
use crate::{c64, C64};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub const NVARS: usize = 6;
pub const VAR_NAMES: [&str; NVARS] = ["z", "zb", "U", "H", "Q", "R"];

pub type Monomial = [u8; NVARS];

/// Multivariate polynomial over Q in canonical (sorted, deduplicated) form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert([0; NVARS], c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        let mut m = [0u8; NVARS];
        m[i] = 1;
        let mut p = Poly::default();
        p.terms.insert(m, BigRational::one());
        p
    }

    /// c * prod(vars[i]^exps[i])
    pub fn term(c: i64, exps: Monomial) -> Self {
        let mut p = Poly::default();
        if c != 0 {
            p.terms.insert(exps, rat(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.insert(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.insert(*m, -c.clone());
        }
        r
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = *m1;
                for (a, b) in m.iter_mut().zip(m2.iter()) {
                    *a += b;
                }
                r.insert(m, c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, k: i64) -> Poly {
        let mut r = Poly::default();
        for (m, c) in &self.terms {
            r.insert(*m, c * rat(k));
        }
        r
    }

    /// Partial derivative with respect to variable i.
    pub fn diff(&self, i: usize) -> Poly {
        let mut r = Poly::default();
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut mm = *m;
                mm[i] -= 1;
                r.insert(mm, c * rat(m[i] as i64));
            }
        }
        r
    }

    /// Numeric evaluation at complex arguments.
    pub fn eval(&self, vals: &[C64; NVARS]) -> C64 {
        let mut acc = c64(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c64(rational_to_f64(c), 0.0);
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= vals[i];
                }
            }
            acc += t;
        }
        acc
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // exact for the small integers appearing in the tables
    let nf: f64 = n.to_string().parse().unwrap_or(f64::NAN);
    let df: f64 = d.to_string().parse().unwrap_or(f64::NAN);
    nf / df
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let abs = c.abs();
            write!(f, " {sign} ")?;
            let mut wrote = false;
            if !abs.is_one() || m.iter().all(|&e| e == 0) {
                write!(f, "{abs}")?;
                wrote = true;
            }
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    if wrote {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", VAR_NAMES[i])?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                    wrote = true;
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// A first-order differential operator sum_i coeff_i d/d(var_i).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    pub coeffs: [Poly; NVARS],
    pub name: String,
}

impl VectorField {
    pub fn named(name: &str, coeffs: [Poly; NVARS]) -> Self {
        VectorField {
            coeffs,
            name: name.to_string(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn sub(&self, o: &VectorField) -> VectorField {
        let mut c: [Poly; NVARS] = Default::default();
        for i in 0..NVARS {
            c[i] = self.coeffs[i].sub(&o.coeffs[i]);
        }
        VectorField::named(&format!("{} - {}", self.name, o.name), c)
    }

    pub fn scale(&self, k: i64) -> VectorField {
        let mut c: [Poly; NVARS] = Default::default();
        for i in 0..NVARS {
            c[i] = self.coeffs[i].scale(k);
        }
        VectorField::named(&format!("{k} {}", self.name), c)
    }

    /// Apply the operator to a polynomial: X(p) = sum_i coeff_i dp/dvar_i.
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut r = Poly::default();
        for i in 0..NVARS {
            if !self.coeffs[i].is_zero() {
                r = r.add(&self.coeffs[i].mul(&p.diff(i)));
            }
        }
        r
    }
}

/// [X, Y] acting as first-order operators, component-wise
/// [X, Y]_k = X(Y_k) - Y(X_k); exact arithmetic throughout.
pub fn commutator(x: &VectorField, y: &VectorField) -> VectorField {
    let mut c: [Poly; NVARS] = Default::default();
    for (k, ck) in c.iter_mut().enumerate() {
        *ck = x.apply(&y.coeffs[k]).sub(&y.apply(&x.coeffs[k]));
    }
    VectorField::named(&format!("[{}, {}]", x.name, y.name), c)
}

const Z: usize = 0;
const ZB: usize = 1;
const UU: usize = 2;
const HH: usize = 3;
const QQ: usize = 4;
const RR: usize = 5;

/// X(F) = F(z) dz + F'(z) (-2 Q dQ - U dU) for a polynomial F of z.
pub fn gen_x(f: &Poly) -> VectorField {
    let fp = f.diff(Z);
    let mut c: [Poly; NVARS] = Default::default();
    c[Z] = f.clone();
    c[QQ] = fp.mul(&Poly::var(QQ)).scale(-2);
    c[UU] = fp.mul(&Poly::var(UU)).scale(-1);
    VectorField::named(&format!("X({f})"), c)
}

/// Y(G) = G(zb) dzb + G'(zb) (-2 R dR - U dU) for a polynomial G of zbar.
pub fn gen_y(g: &Poly) -> VectorField {
    let gp = g.diff(ZB);
    let mut c: [Poly; NVARS] = Default::default();
    c[ZB] = g.clone();
    c[RR] = gp.mul(&Poly::var(RR)).scale(-2);
    c[UU] = gp.mul(&Poly::var(UU)).scale(-1);
    VectorField::named(&format!("Y({g})"), c)
}

/// The scaling generator a = -H dH + Q dQ + R dR + 2 U dU (c = 0 only).
pub fn gen_a() -> VectorField {
    let mut c: [Poly; NVARS] = Default::default();
    c[HH] = Poly::var(HH).scale(-1);
    c[QQ] = Poly::var(QQ);
    c[RR] = Poly::var(RR);
    c[UU] = Poly::var(UU).scale(2);
    VectorField::named("a", c)
}

fn z_pow(k: u8) -> Poly {
    let mut m = [0u8; NVARS];
    m[Z] = k;
    Poly::term(1, m)
}

fn zb_pow(k: u8) -> Poly {
    let mut m = [0u8; NVARS];
    m[ZB] = k;
    Poly::term(1, m)
}

/// The seven generators of the largest finite-dimensional subalgebra:
/// e_j = X(z^j), f_j = Y(zb^j) for j = 0, 1, 2, and a.
pub fn finite_generators() -> Vec<VectorField> {
    let mut v: Vec<VectorField> = (0..3u8)
        .map(|j| {
            let mut g = gen_x(&z_pow(j));
            g.name = format!("e{j}");
            g
        })
        .collect();
    for j in 0..3u8 {
        let mut g = gen_y(&zb_pow(j));
        g.name = format!("f{j}");
        v.push(g);
    }
    v.push(gen_a());
    v
}

/// One row of the verification report.
#[derive(Debug, Clone)]
pub struct TableEntry {
    pub lhs: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct TableReport {
    pub entries: Vec<TableEntry>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    fn check(&mut self, lhs: &str, got: &VectorField, expected: &VectorField, expected_name: &str) {
        self.entries.push(TableEntry {
            lhs: lhs.to_string(),
            expected: expected_name.to_string(),
            pass: got.sub(expected).is_zero(),
        });
    }
}

/// Reproduce every entry of the finite commutator table, the monomial
/// instances of the infinite-dimensional one (F, G = z^j, zb^j for j <= 4),
/// and the direct-sum structure.
pub fn verify_tables() -> TableReport {
    let mut rep = TableReport::default();
    let gens = finite_generators();
    let (e0, e1, e2) = (&gens[0], &gens[1], &gens[2]);
    let (f0, f1, f2) = (&gens[3], &gens[4], &gens[5]);
    let a = &gens[6];

    rep.check("[e0, e1]", &commutator(e0, e1), e0, "e0");
    rep.check("[e0, e2]", &commutator(e0, e2), &e1.scale(2), "2 e1");
    rep.check("[e1, e2]", &commutator(e1, e2), e2, "e2");
    rep.check("[f0, f1]", &commutator(f0, f1), f0, "f0");
    rep.check("[f0, f2]", &commutator(f0, f2), &f1.scale(2), "2 f1");
    rep.check("[f1, f2]", &commutator(f1, f2), f2, "f2");

    let zero = VectorField::named("0", Default::default());
    for ei in [e0, e1, e2] {
        for fj in [f0, f1, f2] {
            rep.check(
                &format!("[{}, {}]", ei.name, fj.name),
                &commutator(ei, fj),
                &zero,
                "0",
            );
        }
    }
    for g in [e0, e1, e2, f0, f1, f2] {
        rep.check(
            &format!("[{}, a]", g.name),
            &commutator(g, a),
            &zero,
            "0",
        );
    }

    // monomial instances of [X(F1), X(F2)] = X(F1 F2' - F1' F2)
    for i in 0..=4u8 {
        for j in (i + 1)..=4u8 {
            let fi = z_pow(i);
            let fj = z_pow(j);
            let lhs = commutator(&gen_x(&fi), &gen_x(&fj));
            let combo = fi.mul(&fj.diff(Z)).sub(&fi.diff(Z).mul(&fj));
            let rhs = gen_x(&combo);
            rep.check(
                &format!("[X(z^{i}), X(z^{j})]"),
                &lhs,
                &rhs,
                &format!("X({combo})"),
            );
            let gi = zb_pow(i);
            let gj = zb_pow(j);
            let lhs = commutator(&gen_y(&gi), &gen_y(&gj));
            let combo = gi.mul(&gj.diff(ZB)).sub(&gi.diff(ZB).mul(&gj));
            let rhs = gen_y(&combo);
            rep.check(
                &format!("[Y(zb^{i}), Y(zb^{j})]"),
                &lhs,
                &rhs,
                &format!("Y({combo})"),
            );
        }
    }
    // [X(F), Y(G)] = 0 and the a-brackets for monomials
    for i in 0..=4u8 {
        for j in 0..=4u8 {
            rep.check(
                &format!("[X(z^{i}), Y(zb^{j})]"),
                &commutator(&gen_x(&z_pow(i)), &gen_y(&zb_pow(j))),
                &zero,
                "0",
            );
        }
        rep.check(
            &format!("[X(z^{i}), a]"),
            &commutator(&gen_x(&z_pow(i)), a),
            &zero,
            "0",
        );
        rep.check(
            &format!("[Y(zb^{i}), a]"),
            &commutator(&gen_y(&zb_pow(i)), a),
            &zero,
            "0",
        );
    }
    rep
}

/// Gauss-Codazzi residuals of an analytic source at one point, computed with
/// five-point stencils in the two independent directions z and zbar. The
/// stencil error is O(delta^4), far below the flow scales it is used against.
pub fn pointwise_gc_residuals<F: AnalyticFields + ?Sized>(
    src: &F,
    z: C64,
    zb: C64,
    delta: f64,
) -> [C64; 3] {
    let at = |z: C64, zb: C64| src.at(z, zb);
    let w = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let c1 = [1.0, -8.0, 0.0, 8.0, -1.0];
    let c2 = [-1.0, 16.0, -30.0, 16.0, -1.0];
    // first derivatives in z of (u, H, Q, R) and in zb
    let mut fz = [[c64(0.0, 0.0); 4]; 5];
    let mut fzb = [[c64(0.0, 0.0); 4]; 5];
    for k in 0..5 {
        let p = at(z + c64(w[k] * delta, 0.0), zb);
        fz[k] = [p.u, p.h, p.q, p.r];
        let p = at(z, zb + c64(w[k] * delta, 0.0));
        fzb[k] = [p.u, p.h, p.q, p.r];
    }
    let d1 = |vals: &[[C64; 4]; 5], j: usize| -> C64 {
        (0..5).map(|k| vals[k][j] * c1[k]).sum::<C64>() / (12.0 * delta)
    };
    let u_z = d1(&fz, 0);
    let h_z = d1(&fz, 1);
    let h_zb = d1(&fzb, 1);
    let q_zb = d1(&fzb, 2);
    let r_z = d1(&fz, 3);
    let _ = u_z;
    // u_z zb: z-stencil of the zb-stencil of u
    let mut u_zb_at = [c64(0.0, 0.0); 5];
    for k in 0..5 {
        let zz = z + c64(w[k] * delta, 0.0);
        let col: C64 = (0..5)
            .map(|m| at(zz, zb + c64(w[m] * delta, 0.0)).u * c1[m])
            .sum();
        u_zb_at[k] = col / (12.0 * delta);
    }
    let u_zzb: C64 = (0..5).map(|k| u_zb_at[k] * c1[k]).sum::<C64>() / (12.0 * delta);
    let _ = c2;
    let p0 = at(z, zb);
    let eu = p0.u.exp();
    let c = src.c();
    [
        u_zzb + (p0.h * p0.h - c * c) * eu * 0.5 - 2.0 * p0.q * p0.r / eu,
        q_zb - h_z * eu * 0.5,
        r_z - h_zb * eu * 0.5,
    ]
}

/// First-order flow of a point symmetry applied to an analytic source: the
/// coordinates shift by eps times the (coordinate-only) z, zb coefficients,
/// the fields by eps times the field coefficients evaluated on the preimage.
pub struct FlowedFields<'a, F: AnalyticFields + ?Sized> {
    pub src: &'a F,
    pub gen: &'a VectorField,
    pub eps: f64,
}

impl<'a, F: AnalyticFields + ?Sized> AnalyticFields for FlowedFields<'a, F> {
    fn at(&self, z: C64, zb: C64) -> FieldsPoint {
        let eps = self.eps;
        let dummy = [z, zb, c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
        // coordinate coefficients must not involve the fields
        let fz = self.gen.coeffs[Z].eval(&dummy);
        let fzb = self.gen.coeffs[ZB].eval(&dummy);
        let zp = z - fz * eps;
        let zbp = zb - fzb * eps;
        let p = self.src.at(zp, zbp);
        let big_u = p.u.exp();
        let vals = [zp, zbp, big_u, p.h, p.q, p.r];
        let phi_u = self.gen.coeffs[UU].eval(&vals);
        let phi_h = self.gen.coeffs[HH].eval(&vals);
        let phi_q = self.gen.coeffs[QQ].eval(&vals);
        let phi_r = self.gen.coeffs[RR].eval(&vals);
        FieldsPoint {
            u: (big_u + phi_u * eps).ln(),
            h: p.h + phi_h * eps,
            q: p.q + phi_q * eps,
            r: p.r + phi_r * eps,
        }
    }
    fn c(&self) -> C64 {
        self.src.c()
    }
}

/// Apply the first-order flow at eps in {1e-2, 5e-3, 2.5e-3}, measure the
/// Gauss-Codazzi residual over the sample points, and return the slope of
/// log(residual) against log(eps). A symmetry cancels the first-order term,
/// giving slope ~2; a non-symmetry leaves slope ~1.
pub fn infinitesimal_invariance<F: AnalyticFields + ?Sized>(
    src: &F,
    gen: &VectorField,
    sample_points: &[C64],
) -> f64 {
    let eps_list = [1e-2, 5e-3, 2.5e-3];
    let mut pairs = Vec::new();
    for &eps in &eps_list {
        let flowed = FlowedFields { src, gen, eps };
        let mut worst: f64 = 0.0;
        for &z in sample_points {
            let r = pointwise_gc_residuals(&flowed, z, z.conj(), 1e-3);
            for e in r {
                worst = worst.max(e.norm());
            }
        }
        pairs.push((eps, worst.max(1e-300)));
    }
    convergence_order(&pairs).unwrap_or(f64::NAN)
}
