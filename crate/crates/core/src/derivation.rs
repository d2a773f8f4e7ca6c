//! Locally nilpotent derivation engine: iterated derivatives, degree,
//! generic locus, exact flow, local slices, and restriction to invariant
//! strata.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::{factorial, Rational};
use crate::vars::{Var, VarKind, VarTable};

/// Default iteration bound for the nilpotency search.
pub const DEFAULT_NILPOTENCY_BOUND: usize = 64;

/// Substitution assignment used for strata and blow-up charts.
pub type Substitution = BTreeMap<Var, MultiPoly>;

/// Point of affine n-space with exact rational coordinates `x_1..x_n`
/// (`x_0` is implicitly 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePoint(pub Vec<Rational>);

impl AffinePoint {
    pub fn coord(&self, j: usize) -> &Rational {
        &self.0[j - 1]
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// A derivation `delta = sum_j delta(x_j) d/dx_j` together with its cached
/// iterated-derivative table. `powers[k][j]` holds `delta^k x_j` for
/// `k = 0..=degree+1` and `j = 0..=n`; row 0 is the (possibly substituted)
/// coordinate row with `x_0 = 1`. Immutable once constructed.
#[derive(Debug, Clone)]
pub struct Derivation {
    table: Arc<VarTable>,
    n: usize,
    generators: Vec<MultiPoly>,
    degree: usize,
    powers: Vec<Vec<MultiPoly>>,
}

impl Derivation {
    /// Builds the derivation with generators `delta(x_1)..delta(x_n)` and
    /// determines its degree: the smallest `d` with `delta^{d+1} x_j = 0`
    /// for all j. Fails if no such `d <= bound` exists.
    pub fn new(
        table: &Arc<VarTable>,
        generators: Vec<MultiPoly>,
        bound: usize,
    ) -> Result<Derivation> {
        let base = identity_base_row(table);
        Derivation::with_base(table, generators, base, bound)
    }

    fn with_base(
        table: &Arc<VarTable>,
        generators: Vec<MultiPoly>,
        base: Vec<MultiPoly>,
        bound: usize,
    ) -> Result<Derivation> {
        let n = table.n();
        if generators.len() != n {
            return Err(Error::InvalidSpec(format!(
                "expected {n} generators, got {}",
                generators.len()
            )));
        }
        for g in &generators {
            check_coordinate_poly(table, g)?;
        }
        for b in &base {
            check_coordinate_poly(table, b)?;
        }
        let mut shell = Derivation {
            table: Arc::clone(table),
            n,
            generators,
            degree: 0,
            powers: Vec::new(),
        };
        shell.fill_powers(base, bound)?;
        Ok(shell)
    }

    fn fill_powers(&mut self, base: Vec<MultiPoly>, bound: usize) -> Result<()> {
        assert!(bound >= 1);
        let mut rows = vec![base];
        loop {
            let prev = rows.last().unwrap();
            let next: Vec<MultiPoly> = prev
                .iter()
                .map(|p| self.apply_delta(p))
                .collect::<Result<_>>()?;
            let all_zero = next.iter().all(|p| p.is_zero());
            rows.push(next);
            if all_zero {
                break;
            }
            if rows.len() > bound + 1 {
                return Err(Error::NotLocallyNilpotent { bound });
            }
        }
        // rows.len() = d + 2: rows 0..=d nonzero chain, row d+1 all zero
        self.degree = rows.len() - 2;
        self.powers = rows;
        Ok(())
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    /// Degree of the action in these coordinates.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `delta^k x_j`, `k <= degree + 1`, `j = 0..=n`.
    pub fn power(&self, k: usize, j: usize) -> &MultiPoly {
        &self.powers[k][j]
    }

    /// Applies the derivation: `sum_j delta(x_j) * dp/dx_j`. The argument
    /// may involve coordinates and chart variables only.
    pub fn apply_delta(&self, p: &MultiPoly) -> Result<MultiPoly> {
        check_coordinate_poly(&self.table, p)?;
        let mut acc = MultiPoly::zero(&self.table);
        for j in 1..=self.n {
            let g = &self.generators[j - 1];
            if g.is_zero() {
                continue;
            }
            let dp = p.differentiate(self.table.x(j))?;
            if dp.is_zero() {
                continue;
            }
            acc = acc.add(&g.mul(&dp)?)?;
        }
        Ok(acc)
    }

    fn point_assignment(&self, x: &AffinePoint) -> Result<BTreeMap<Var, Rational>> {
        if x.dim() != self.n {
            return Err(Error::IndexOutOfRange(format!(
                "point has {} coordinates, expected {}",
                x.dim(),
                self.n
            )));
        }
        let mut map = BTreeMap::new();
        map.insert(self.table.x(0), Rational::from_integer(1.into()));
        for j in 1..=self.n {
            map.insert(self.table.x(j), x.coord(j).clone());
        }
        Ok(map)
    }

    /// Evaluates a coordinate polynomial at an affine point.
    pub fn eval_at(&self, p: &MultiPoly, x: &AffinePoint) -> Result<Rational> {
        p.evaluate(&self.point_assignment(x)?)
    }

    /// The orbit point with coordinates `sum_{k=0}^d t^k/k! (delta^k x_j)(x)`.
    /// In the sign convention where the group acts on functions by
    /// `t.f = sum t^k/k! delta^k f`, this point is written `-t.x`; the map
    /// `t -> flow(x, t)` is additive either way, so no sign is second-guessed
    /// here.
    pub fn flow(&self, x: &AffinePoint, t: &Rational) -> Result<AffinePoint> {
        let assign = self.point_assignment(x)?;
        let mut coords = Vec::with_capacity(self.n);
        for j in 1..=self.n {
            let mut acc = Rational::zero();
            let mut tpow = Rational::from_integer(1.into());
            for k in 0..=self.degree {
                let val = self.powers[k][j].evaluate(&assign)?;
                acc += &val * &tpow / Rational::from_integer(factorial(k));
                tpow *= t;
            }
            coords.push(acc);
        }
        Ok(AffinePoint(coords))
    }

    /// True iff some `delta^d x_j` does not vanish at `x`, i.e. the orbit
    /// through `x` has maximal degree.
    pub fn in_generic_locus(&self, x: &AffinePoint) -> Result<bool> {
        let assign = self.point_assignment(x)?;
        for j in 1..=self.n {
            if !self.powers[self.degree][j].evaluate(&assign)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Local slice time `t(x) = (delta^{d-1} x_j)(x) / (delta^d x_j)(x)`.
    pub fn slice_time(&self, x: &AffinePoint, j: usize) -> Result<Rational> {
        if self.degree == 0 {
            return Err(Error::TrivialAction);
        }
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange(format!("coordinate index {j}")));
        }
        let assign = self.point_assignment(x)?;
        let den = self.powers[self.degree][j].evaluate(&assign)?;
        if den.is_zero() {
            return Err(Error::PointOutsideChart { j });
        }
        let num = self.powers[self.degree - 1][j].evaluate(&assign)?;
        Ok(num / den)
    }

    /// Translates `x` along the orbit to the slice `{delta^{d-1} x_j = 0}`:
    /// returns `flow(x, -t(x))`.
    pub fn slice_normalize(&self, x: &AffinePoint, j: usize) -> Result<AffinePoint> {
        let t = self.slice_time(x, j)?;
        self.flow(x, &(-t))
    }

    /// Witness probe: true iff every generator vanishes at `x`, i.e. `x` is
    /// a fixed point and the action cannot be free. A `false` answer
    /// certifies nothing.
    pub fn is_fixed_point(&self, x: &AffinePoint) -> Result<bool> {
        let assign = self.point_assignment(x)?;
        for g in &self.generators {
            if !g.evaluate(&assign)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Induced derivation on an invariant stratum or chart image. The
    /// substitution must be consistent: for every replaced variable `v`,
    /// `sub(delta(v))` must agree with the induced derivative of the image
    /// of `v`, and substituted generators must live in the remaining
    /// coordinates. The degree of the result is computed fresh.
    pub fn restrict(&self, sub: &Substitution) -> Result<Derivation> {
        for (v, img) in sub {
            match self.table.kind(*v) {
                VarKind::Coord(j) if j >= 1 => {}
                _ => {
                    return Err(Error::SubstitutionNotInvariant(format!(
                        "`{}` is not a coordinate that can be replaced",
                        self.table.name(*v)
                    )))
                }
            }
            for w in img.vars_used() {
                if sub.contains_key(&w) {
                    return Err(Error::SubstitutionNotInvariant(format!(
                        "image of `{}` mentions replaced variable `{}`",
                        self.table.name(*v),
                        self.table.name(w)
                    )));
                }
            }
        }
        let generators: Vec<MultiPoly> = self
            .generators
            .iter()
            .map(|g| g.substitute(sub))
            .collect::<Result<_>>()?;
        for (j, g) in generators.iter().enumerate() {
            for w in g.vars_used() {
                if sub.contains_key(&w) {
                    return Err(Error::SubstitutionNotInvariant(format!(
                        "substituted delta(x{}) still mentions `{}`",
                        j + 1,
                        self.table.name(w)
                    )));
                }
            }
        }
        let mut base = identity_base_row(&self.table);
        for j in 1..=self.n {
            if let Some(img) = sub.get(&self.table.x(j)) {
                base[j] = img.clone();
            }
        }
        let restricted =
            Derivation::with_base(&self.table, generators, base, DEFAULT_NILPOTENCY_BOUND)?;
        // invariance: the induced derivative of each replaced image must
        // reproduce the substituted generator
        for j in 1..=self.n {
            if sub.contains_key(&self.table.x(j)) {
                let via_image = restricted.powers[1][j].clone();
                let via_generator = &restricted.generators[j - 1];
                if via_image != *via_generator {
                    return Err(Error::SubstitutionNotInvariant(format!(
                        "stratum is not invariant along x{j}"
                    )));
                }
            }
        }
        Ok(restricted)
    }
}

fn identity_base_row(table: &Arc<VarTable>) -> Vec<MultiPoly> {
    let mut base = vec![MultiPoly::one(table)];
    for j in 1..=table.n() {
        base.push(MultiPoly::var(table, table.x(j)));
    }
    base
}

fn check_coordinate_poly(table: &VarTable, p: &MultiPoly) -> Result<()> {
    for v in p.vars_used() {
        match table.kind(v) {
            VarKind::Coord(_) | VarKind::Chart(_) => {}
            _ => return Err(Error::UnknownVariable(table.name(v).to_string())),
        }
    }
    Ok(())
}
