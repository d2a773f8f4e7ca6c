//! Sparse multivariate polynomials with exact rational coefficients over a
//! shared variable table.
//!
//! Terms are kept in graded reverse lexicographic order (grevlex) with the
//! table's fixed variable order; the map never stores a zero coefficient, so
//! structural equality is semantic equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{is_negative, rational_string, Rational};
use crate::vars::{Var, VarKind, VarTable};

/// Exponent vector, one entry per table variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(width: usize) -> Monomial {
        Monomial(vec![0; width].into_boxed_slice())
    }

    pub fn var(width: usize, v: Var, exp: u32) -> Monomial {
        let mut e = vec![0; width];
        e[v.index()] = exp;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Monomial {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Degree counted only over variables selected by `pred`.
    pub fn degree_where(&self, table: &VarTable, pred: impl Fn(VarKind) -> bool) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(table.kind(Var(*i))))
            .map(|(_, &e)| e as u64)
            .sum()
    }

    fn try_mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut e = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            e.push(a.checked_add(*b).ok_or(Error::ExponentOverflow)?);
        }
        Ok(Monomial(e.into_boxed_slice()))
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must have checked divisibility.
    fn quotient_into(&self, other: &Monomial) -> Monomial {
        let e: Vec<u32> = other
            .0
            .iter()
            .zip(self.0.iter())
            .map(|(b, a)| b - a)
            .collect();
        Monomial(e.into_boxed_slice())
    }
}

/// Grevlex: compare total degree first; on ties the monomial whose exponent
/// difference has its last nonzero entry negative is the larger one.
impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(other.0.iter()).rev() {
            match a.cmp(b) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {}
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: exponent vectors mapped to nonzero rational
/// coefficients. The zero polynomial has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(table: &Arc<VarTable>) -> MultiPoly {
        MultiPoly {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<VarTable>) -> MultiPoly {
        MultiPoly::constant(table, Rational::one())
    }

    pub fn constant(table: &Arc<VarTable>, c: Rational) -> MultiPoly {
        let mut p = MultiPoly::zero(table);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(table.len()), c);
        }
        p
    }

    pub fn var(table: &Arc<VarTable>, v: Var) -> MultiPoly {
        let mut p = MultiPoly::zero(table);
        p.terms
            .insert(Monomial::var(table.len(), v, 1), Rational::one());
        p
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Leading (largest) term in the canonical order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn constant_value(&self) -> Option<&Rational> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c);
            }
        }
        if self.is_zero() {
            return None;
        }
        None
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Variables occurring with a positive exponent.
    pub fn vars_used(&self) -> Vec<Var> {
        let mut used = vec![false; self.table.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter()
            .enumerate()
            .filter(|(_, u)| **u)
            .map(|(i, _)| Var(i))
            .collect()
    }

    pub fn uses_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// Adds one term directly; the monomial must belong to this table.
    pub(crate) fn insert_raw(&mut self, m: Monomial, c: Rational) {
        Self::insert_term(&mut self.terms, m, c);
    }

    fn check_table(&self, other: &MultiPoly) -> Result<()> {
        if Arc::ptr_eq(&self.table, &other.table) || self.table == other.table {
            Ok(())
        } else {
            Err(Error::MismatchedTables)
        }
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_table(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        Ok(MultiPoly {
            table: Arc::clone(&self.table),
            terms,
        })
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        MultiPoly {
            table: Arc::clone(&self.table),
            terms,
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.table);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        MultiPoly {
            table: Arc::clone(&self.table),
            terms,
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_table(other)?;
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                Self::insert_term(&mut terms, m1.try_mul(m2)?, c1 * c2);
            }
        }
        Ok(MultiPoly {
            table: Arc::clone(&self.table),
            terms,
        })
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, e: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(&self.table);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, v: Var) -> Result<MultiPoly> {
        if v.index() >= self.table.len() {
            return Err(Error::UnknownVariable(format!("#{}", v.index())));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[v.index()] = e - 1;
            Self::insert_term(
                &mut terms,
                Monomial(exps.into_boxed_slice()),
                c * Rational::from_integer(e.into()),
            );
        }
        Ok(MultiPoly {
            table: Arc::clone(&self.table),
            terms,
        })
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(&self, assignment: &BTreeMap<Var, MultiPoly>) -> Result<MultiPoly> {
        for (v, img) in assignment {
            if v.index() >= self.table.len() {
                return Err(Error::UnknownVariable(format!("#{}", v.index())));
            }
            self.check_table(img)?;
        }
        let width = self.table.len();
        let mut out = MultiPoly::zero(&self.table);
        // cache of image powers per substituted variable
        let mut powers: BTreeMap<Var, Vec<MultiPoly>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut kept = vec![0u32; width];
            let mut factor = MultiPoly::constant(&self.table, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = Var(i);
                match assignment.get(&v) {
                    None => kept[i] = e,
                    Some(img) => {
                        let cache = powers.entry(v).or_insert_with(Vec::new);
                        while cache.len() < e as usize {
                            let next = match cache.last() {
                                None => img.clone(),
                                Some(prev) => prev.mul(img)?,
                            };
                            cache.push(next);
                        }
                        factor = factor.mul(&cache[e as usize - 1])?;
                    }
                }
            }
            let kept_mono = Monomial(kept.into_boxed_slice());
            let mut shifted = BTreeMap::new();
            for (fm, fc) in factor.terms {
                Self::insert_term(&mut shifted, fm.try_mul(&kept_mono)?, fc);
            }
            for (sm, sc) in shifted {
                Self::insert_term(&mut out.terms, sm, sc);
            }
        }
        Ok(out)
    }

    /// Exact rational value at a point. Every variable occurring in the
    /// polynomial must be assigned. Powers of the assigned values are
    /// cached across terms.
    pub fn evaluate(&self, point: &BTreeMap<Var, Rational>) -> Result<Rational> {
        let mut powers: Vec<Vec<Rational>> = vec![Vec::new(); self.table.len()];
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                if cache.is_empty() {
                    let val = point.get(&Var(i)).ok_or_else(|| {
                        Error::UnassignedVariable(self.table.name(Var(i)).to_string())
                    })?;
                    cache.push(Rational::one());
                    cache.push(val.clone());
                }
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                v *= &cache[e as usize];
            }
            total += v;
        }
        Ok(total)
    }

    /// Exact division: returns `r` with `r * q == self`, or the
    /// `NonDivisible` signal. Leading-term reduction in the canonical order;
    /// the remainder must come out exactly zero.
    pub fn exact_divide(&self, q: &MultiPoly) -> Result<MultiPoly> {
        self.check_table(q)?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (qm, qc) = q.leading().unwrap();
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero(&self.table);
        while let Some((rm, rc)) = rem.leading() {
            if !qm.divides(rm) {
                return Err(Error::NonDivisible);
            }
            let tm = qm.quotient_into(rm);
            let tc = rc / qc;
            let mut t = MultiPoly::zero(&self.table);
            t.terms.insert(tm, tc);
            rem = rem.sub(&t.mul(q)?)?;
            quo = quo.add(&t)?;
        }
        Ok(quo)
    }

    /// True when the other polynomial divides this one exactly.
    pub fn divisible_by(&self, q: &MultiPoly) -> bool {
        self.exact_divide(q).is_ok()
    }

    /// Projective equality: true iff `self == c * other` for some nonzero
    /// rational `c`. Cross-multiplies the leading coefficients; two zero
    /// polynomials are proportional.
    pub fn proportional(&self, other: &MultiPoly) -> Result<bool> {
        self.check_table(other)?;
        match (self.leading(), other.leading()) {
            (None, None) => Ok(true),
            (None, Some(_)) | (Some(_), None) => Ok(false),
            (Some((_, lp)), Some((_, lq))) => Ok(other.scale(lp) == self.scale(lq)),
        }
    }

    /// Repeatedly divides out each candidate while it divides exactly,
    /// recording multiplicities. Zero input returns zero with an empty
    /// record; constant or zero candidates are skipped.
    pub fn content_trial_division(
        &self,
        candidates: &[MultiPoly],
    ) -> (MultiPoly, Vec<(MultiPoly, u32)>) {
        let mut reduced = self.clone();
        let mut removed = Vec::new();
        if reduced.is_zero() {
            return (reduced, removed);
        }
        for cand in candidates {
            if cand.is_zero() || cand.is_constant() {
                continue;
            }
            let mut power = 0u32;
            while let Ok(q) = reduced.exact_divide(cand) {
                reduced = q;
                power += 1;
            }
            if power > 0 {
                removed.push((cand.clone(), power));
            }
        }
        (reduced, removed)
    }

    /// Canonical printed form: terms in descending grevlex order.
    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&term_string(&self.table, m, &abs));
        }
        out
    }

    /// Integer-normalized content with a positive leading coefficient; the
    /// form stored in golden files.
    pub fn golden_normalize(&self) -> MultiPoly {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if is_negative(self.leading().unwrap().1) {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn golden_string(&self) -> String {
        self.golden_normalize().canonical_string()
    }
}

fn term_string(table: &VarTable, m: &Monomial, abs_coeff: &Rational) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !abs_coeff.is_one() || m.is_one() {
        parts.push(rational_string(abs_coeff));
    }
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = table.name(Var(i));
        if e == 1 {
            parts.push(name.to_string());
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join("*")
}
