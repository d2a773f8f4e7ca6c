//! Boundary analysis: restriction of the Chow form to strata, lifting
//! through user-supplied blow-up charts by exact division, decomposition of
//! limit cycles into orbit-closure and residual factors, and the
//! Hausdorff/properness verdicts.
//!
//! All divisibility questions are decided in the expanded dual-point ring,
//! never in the gamma ring, which has Pluecker relations.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::derivation::{AffinePoint, Derivation, Substitution};
use crate::error::{Error, Result};
use crate::gamma::{chow_form, chow_form_at, gamma_reduce, GammaForm};
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::vars::{Var, VarKind, VarTable};

/// A stratum inclusion: coordinates replaced by polynomials in the
/// remaining ones, plus extra content candidates that are invertible on the
/// stratum.
#[derive(Debug, Clone)]
pub struct Stratum {
    pub name: String,
    pub sub: Substitution,
    pub candidates: Vec<MultiPoly>,
}

/// An affine blow-up chart: one coordinate rewritten through a chart
/// variable, with the generator whose vanishing cuts the exceptional locus.
#[derive(Debug, Clone)]
pub struct ChartMap {
    pub name: String,
    pub sub: Substitution,
    pub exceptional: MultiPoly,
}

/// Limit cycle written as `multiplicity * C + Z`: the orbit-closure factor
/// through the boundary point and the residual cycle, with any coordinate
/// content stripped off the residual recorded separately.
#[derive(Debug, Clone)]
pub struct CycleDecomposition {
    pub multiplicity: u32,
    pub orbit_factor: GammaForm,
    pub residual: GammaForm,
    pub residual_content: Vec<(MultiPoly, u32)>,
    pub limit_gamma_degree: u32,
}

impl CycleDecomposition {
    pub fn at_infinity_residual(&self) -> bool {
        self.residual.at_infinity()
    }

    /// `d = n * deg C + deg Z` must hold exactly.
    pub fn degree_budget_holds(&self) -> bool {
        self.limit_gamma_degree
            == self.multiplicity * self.orbit_factor.gamma_degree() + self.residual.gamma_degree()
    }
}

/// Removes joint content and applies the stratum substitution to every
/// coefficient. The coordinate variables are always content candidates, on
/// top of whatever the caller supplies.
pub fn restrict_form(
    form: &GammaForm,
    sub: &Substitution,
    candidates: &[MultiPoly],
) -> Result<GammaForm> {
    let (reduced, _) = strip_content(form, candidates);
    let restricted = reduced.poly().substitute(sub)?;
    if restricted.is_zero() {
        return Err(Error::ContentRemovalInsufficient);
    }
    GammaForm::from_poly(restricted)
}

/// Substitutes the chart map into every coefficient, then divides the whole
/// form by the exceptional generator as often as it divides exactly.
/// Returns the lift and the extracted power. Expects a form whose removable
/// content has already been stripped.
pub fn chart_lift(form: &GammaForm, chart: &ChartMap) -> Result<(GammaForm, u32)> {
    if chart.exceptional.is_zero() {
        return Err(Error::InvalidSpec(format!(
            "chart `{}` has a zero exceptional generator",
            chart.name
        )));
    }
    let substituted = form.poly().substitute(&chart.sub)?;
    if substituted.is_zero() {
        return Err(Error::ZeroLift);
    }
    let mut lift = substituted;
    let mut power = 0u32;
    while let Ok(q) = lift.exact_divide(&chart.exceptional) {
        lift = q;
        power += 1;
    }
    Ok((GammaForm::from_poly(lift)?, power))
}

/// Divides the expanded limit form by the expanded orbit-closure Chow form
/// as often as possible; the quotient is the residual cycle. Division
/// happens in the dual-point ring; the residual is rewritten back into
/// gamma variables and its coordinate content is stripped and recorded.
pub fn decompose_limit_cycle(
    limit_form: &GammaForm,
    stratum_derivation: &Derivation,
    candidates: &[MultiPoly],
) -> Result<CycleDecomposition> {
    if stratum_derivation.degree() == 0 {
        return Err(Error::DecompositionFailed(
            "stratum derivation has degree 0".to_string(),
        ));
    }
    let orbit_factor = chow_form(stratum_derivation)?;
    let expanded_orbit = orbit_factor.expand()?;
    if expanded_orbit.is_zero() {
        return Err(Error::DecompositionFailed(
            "orbit-closure Chow form vanished".to_string(),
        ));
    }
    let mut rest = limit_form.expand()?;
    let mut multiplicity = 0u32;
    while let Ok(q) = rest.exact_divide(&expanded_orbit) {
        rest = q;
        multiplicity += 1;
    }
    if multiplicity == 0 {
        return Err(Error::DecompositionFailed(
            "orbit-closure factor does not divide the limit cycle; \
             wrong stratum derivation or missing content removal"
                .to_string(),
        ));
    }
    let residual_raw = gamma_reduce(&rest)?;
    let (residual, residual_content) = strip_content(&residual_raw, candidates);
    Ok(CycleDecomposition {
        multiplicity,
        orbit_factor,
        residual,
        residual_content,
        limit_gamma_degree: limit_form.gamma_degree(),
    })
}

/// True iff the form is contained in the hyperplane at infinity: no
/// index-0 gamma variable occurs.
pub fn at_infinity(form: &GammaForm) -> bool {
    form.at_infinity()
}

/// Checks a claimed factorization `prod factor^mult` against `form`,
/// comparing expansions projectively.
pub fn verify_factorization(form: &GammaForm, factors: &[(GammaForm, u32)]) -> Result<bool> {
    let table = Arc::clone(form.table());
    let mut product = MultiPoly::one(&table);
    for (f, mult) in factors {
        product = product.mul(&f.expand()?.pow(*mult)?)?;
    }
    form.expand()?.proportional(&product)
}

/// Joint content removal over the coordinate variables plus the supplied
/// candidates; a candidate divides the form iff it divides every gamma
/// coefficient, which is the same as dividing the whole polynomial.
fn strip_content(form: &GammaForm, candidates: &[MultiPoly]) -> (GammaForm, Vec<(MultiPoly, u32)>) {
    let table = Arc::clone(form.table());
    let mut all = coordinate_candidates(&table);
    all.extend(candidates.iter().cloned());
    let (reduced, removed) = form.poly().content_trial_division(&all);
    (
        GammaForm::from_poly(reduced).expect("content removal preserves validity"),
        removed,
    )
}

fn coordinate_candidates(table: &Arc<VarTable>) -> Vec<MultiPoly> {
    (1..=table.n())
        .map(|j| MultiPoly::var(table, table.x(j)))
        .collect()
}

/// One analyzed boundary piece: a stratum restriction or a chart lift
/// restricted to its exceptional divisor.
#[derive(Debug, Clone)]
pub struct BoundaryPiece {
    pub name: String,
    pub is_chart: bool,
    /// Constant relations describing the boundary locus, e.g. "x1 = 0, x2 = -1".
    pub center_desc: String,
    pub lift_power: Option<u32>,
    pub restricted_form: GammaForm,
    pub decomposition: CycleDecomposition,
    center_relations: Vec<(Var, Rational)>,
    stratum_derivation: Derivation,
}

impl BoundaryPiece {
    pub fn hausdorff_ok(&self) -> bool {
        self.decomposition.at_infinity_residual()
    }

    pub fn proper_ok(&self) -> bool {
        self.hausdorff_ok() && self.decomposition.multiplicity == 1
    }

    pub fn stratum_derivation(&self) -> &Derivation {
        &self.stratum_derivation
    }
}

/// Result of the whole boundary analysis. Verdicts are conditional on the
/// supplied strata and charts covering the boundary.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub pieces: Vec<BoundaryPiece>,
    pub hausdorff: bool,
    pub proper: bool,
    /// Pairs of boundary loci whose orbits appear in one limit cycle.
    pub witness_pairs: Vec<(String, String)>,
}

impl Analysis {
    pub fn verdict(&self) -> &'static str {
        if self.proper {
            "proper (relative to supplied strata)"
        } else if self.hausdorff {
            "Hausdorff, not proper (relative to supplied strata)"
        } else {
            "non-Hausdorff (relative to supplied strata)"
        }
    }
}

/// Hausdorff iff every residual lies at infinity; proper iff additionally
/// every multiplicity is one. Both verdicts are conditional on the
/// analyzed pieces covering the boundary, which the tool cannot verify.
pub fn stratum_verdict(pieces: &[BoundaryPiece]) -> (bool, bool) {
    let hausdorff = pieces.iter().all(|p| p.hausdorff_ok());
    let proper = hausdorff && pieces.iter().all(|p| p.decomposition.multiplicity == 1);
    (hausdorff, proper)
}

/// Runs the full pipeline: restriction of the Chow form to every stratum,
/// lift through every chart with restriction to its exceptional divisor,
/// decomposition of each limit cycle, and the verdicts. The seed drives
/// the sampling used to identify non-separated orbit pairs.
pub fn analyze(
    derivation: &Derivation,
    content_candidates: &[MultiPoly],
    strata: &[Stratum],
    charts: &[ChartMap],
    seed: u64,
) -> Result<Analysis> {
    let table = Arc::clone(derivation.table());
    let form = chow_form(derivation)?;
    let (reduced, _) = strip_content(&form, content_candidates);

    let mut pieces = Vec::new();
    for stratum in strata {
        let mut cands = content_candidates.to_vec();
        cands.extend(stratum.candidates.iter().cloned());
        let restricted = restrict_form(&form, &stratum.sub, &cands)?;
        let stratum_derivation = derivation.restrict(&stratum.sub)?;
        let decomposition = decompose_limit_cycle(&restricted, &stratum_derivation, &cands)?;
        let relations = constant_relations(&table, &stratum.sub);
        pieces.push(BoundaryPiece {
            name: stratum.name.clone(),
            is_chart: false,
            center_desc: relations_desc(&table, &relations),
            lift_power: None,
            restricted_form: restricted,
            decomposition,
            center_relations: relations,
            stratum_derivation,
        });
    }
    for chart in charts {
        let (lift, power) = chart_lift(&reduced, chart)?;
        let divisor_sub = divisor_substitution(&table, &chart.exceptional)?;
        let on_divisor = lift.poly().substitute(&divisor_sub)?;
        if on_divisor.is_zero() {
            return Err(Error::ZeroLift);
        }
        let on_divisor = GammaForm::from_poly(on_divisor)?;
        let center_sub = compose_substitutions(&chart.sub, &divisor_sub)?;
        let stratum_derivation = derivation.restrict(&center_sub)?;
        let decomposition =
            decompose_limit_cycle(&on_divisor, &stratum_derivation, content_candidates)?;
        let relations = constant_relations(&table, &center_sub);
        pieces.push(BoundaryPiece {
            name: chart.name.clone(),
            is_chart: true,
            center_desc: relations_desc(&table, &relations),
            lift_power: Some(power),
            restricted_form: on_divisor,
            decomposition,
            center_relations: relations,
            stratum_derivation,
        });
    }

    let (hausdorff, proper) = stratum_verdict(&pieces);
    let witness_pairs = if hausdorff {
        Vec::new()
    } else {
        find_witness_pairs(&pieces, seed)?
    };
    Ok(Analysis {
        pieces,
        hausdorff,
        proper,
        witness_pairs,
    })
}

/// Solves `a*x_i + b = 0` for the single coordinate of an affine-linear
/// exceptional generator.
fn divisor_substitution(table: &Arc<VarTable>, exceptional: &MultiPoly) -> Result<Substitution> {
    let vars = exceptional.vars_used();
    if vars.len() != 1 || exceptional.total_degree() != 1 {
        return Err(Error::InvalidSpec(
            "exceptional generator must be affine-linear in one coordinate".to_string(),
        ));
    }
    let v = vars[0];
    if !matches!(table.kind(v), VarKind::Coord(j) if j >= 1) {
        return Err(Error::InvalidSpec(
            "exceptional generator must involve a coordinate variable".to_string(),
        ));
    }
    let lin = exceptional.differentiate(v)?;
    let a = lin
        .constant_value()
        .cloned()
        .ok_or_else(|| Error::InvalidSpec("exceptional generator is not linear".to_string()))?;
    let mut at_zero = Substitution::new();
    at_zero.insert(v, MultiPoly::zero(table));
    let b = exceptional.substitute(&at_zero)?;
    let b = if b.is_zero() {
        Rational::zero()
    } else {
        b.constant_value().cloned().ok_or_else(|| {
            Error::InvalidSpec("exceptional generator is not affine-linear".to_string())
        })?
    };
    let mut sub = Substitution::new();
    sub.insert(v, MultiPoly::constant(table, -b / a));
    Ok(sub)
}

/// `second(first(x))` on every variable either map touches.
fn compose_substitutions(first: &Substitution, second: &Substitution) -> Result<Substitution> {
    let mut out = Substitution::new();
    for (v, img) in first {
        out.insert(*v, img.substitute(second)?);
    }
    for (v, img) in second {
        out.entry(*v).or_insert_with(|| img.clone());
    }
    Ok(out)
}

fn constant_relations(table: &Arc<VarTable>, sub: &Substitution) -> Vec<(Var, Rational)> {
    let mut rels = Vec::new();
    for (v, img) in sub {
        if !matches!(table.kind(*v), VarKind::Coord(_)) {
            continue;
        }
        if img.is_zero() {
            rels.push((*v, Rational::zero()));
        } else if let Some(c) = img.constant_value() {
            rels.push((*v, c.clone()));
        }
    }
    rels
}

fn relations_desc(table: &Arc<VarTable>, rels: &[(Var, Rational)]) -> String {
    if rels.is_empty() {
        return "(no constant relations)".to_string();
    }
    rels.iter()
        .map(|(v, c)| {
            format!(
                "{} = {}",
                table.name(*v),
                crate::rational::rational_string(c)
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// For every residual factor that meets affine space, samples the divisor
/// coordinates, reads off the line the residual cuts out, recovers a point
/// on it, and looks for a supplied boundary piece whose orbit closure
/// through that point reproduces the factor exactly. Verified matches are
/// reported as non-separated pairs.
fn find_witness_pairs(pieces: &[BoundaryPiece], seed: u64) -> Result<Vec<(String, String)>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut pairs: BTreeSet<(String, String)> = BTreeSet::new();
    for piece in pieces {
        if piece.hausdorff_ok() || piece.decomposition.residual.gamma_degree() != 1 {
            continue;
        }
        if let Some(partner) = match_residual_line(piece, pieces, &mut rng)? {
            let a = piece.center_desc.clone();
            let b = partner;
            let pair = if a <= b { (a, b) } else { (b, a) };
            pairs.insert(pair);
        }
    }
    Ok(pairs.into_iter().collect())
}

fn match_residual_line(
    piece: &BoundaryPiece,
    pieces: &[BoundaryPiece],
    rng: &mut ChaCha12Rng,
) -> Result<Option<String>> {
    let residual = &piece.decomposition.residual;
    let table = Arc::clone(residual.table());
    let free_vars: Vec<Var> = residual
        .poly()
        .vars_used()
        .into_iter()
        .filter(|v| !matches!(table.kind(*v), VarKind::Gamma(_, _)))
        .collect();
    'samples: for _ in 0..24 {
        let mut assign: BTreeMap<Var, MultiPoly> = BTreeMap::new();
        for v in &free_vars {
            let val = Rational::new(
                rng.gen_range(-9i64..=9).into(),
                rng.gen_range(1i64..=9).into(),
            );
            assign.insert(*v, MultiPoly::constant(&table, val));
        }
        let numeric = GammaForm::from_poly(residual.poly().substitute(&assign)?)?;
        if numeric.is_zero() {
            continue;
        }
        let Some(point) = line_point(&table, &numeric) else {
            continue 'samples;
        };
        // prefer the most specific matching locus
        let mut best: Option<(usize, String)> = None;
        for candidate in pieces {
            if !candidate
                .center_relations
                .iter()
                .all(|(v, c)| point_coord(&point, v) == *c)
            {
                continue;
            }
            let orbit = chow_form_at(&candidate.stratum_derivation, &point)?;
            if orbit.poly().proportional(numeric.poly())? {
                let specificity = candidate.center_relations.len();
                if best.as_ref().map_or(true, |(s, _)| specificity > *s) {
                    best = Some((specificity, candidate.center_desc.clone()));
                }
            }
        }
        if let Some((_, desc)) = best {
            return Ok(Some(desc));
        }
    }
    Ok(None)
}

fn point_coord(point: &AffinePoint, v: &Var) -> Rational {
    // coordinate variables occupy the first table slots, x0 excluded
    point.0[v.index() - 1].clone()
}

/// Reads the Pluecker coordinates of the line a numeric gamma-linear form
/// cuts out, checks the Pluecker relations, and returns an affine point on
/// the line. `None` when the line lies at infinity or the coefficients are
/// not decomposable.
fn line_point(table: &Arc<VarTable>, numeric: &GammaForm) -> Option<AffinePoint> {
    let n = table.n();
    let mut pluecker: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (m, c) in numeric.poly().terms() {
        let mut gamma_slot: Option<(usize, usize)> = None;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            match table.kind(Var(i)) {
                VarKind::Gamma(j1, j2) if e == 1 && gamma_slot.is_none() => {
                    gamma_slot = Some((j1, j2));
                }
                _ => return None,
            }
        }
        let (j1, j2) = gamma_slot?;
        pluecker.insert((j1, j2), -c.clone());
    }
    let p = |j1: usize, j2: usize| -> Rational {
        if j1 == j2 {
            return Rational::zero();
        }
        if j1 < j2 {
            pluecker
                .get(&(j1, j2))
                .cloned()
                .unwrap_or_else(Rational::zero)
        } else {
            -pluecker
                .get(&(j2, j1))
                .cloned()
                .unwrap_or_else(Rational::zero)
        }
    };
    // decomposability
    for i in 0..=n {
        for j in (i + 1)..=n {
            for k in (j + 1)..=n {
                for l in (k + 1)..=n {
                    let rel = &p(i, j) * &p(k, l) - &p(i, k) * &p(j, l) + &p(i, l) * &p(j, k);
                    if !rel.is_zero() {
                        return None;
                    }
                }
            }
        }
    }
    // an affine point needs a direction slot p_{0,j*} != 0
    let pivot = (1..=n).find(|&j| !p(0, j).is_zero())?;
    let scale = p(0, pivot);
    let coords: Vec<Rational> = (1..=n)
        .map(|i| {
            if i == pivot {
                Rational::zero()
            } else {
                p(i, pivot) / &scale
            }
        })
        .collect();
    Some(AffinePoint(coords))
}
