//! Unramified, smooth and étale verdicts decided by Jacobian minor ideals,
//! the standard charts that certify them, and the Hensel correction step.

mod hensel;

use std::fmt;
use std::sync::Arc;

use crate::corering::{Field, MonomialOrder, Polynomial, Ring, Scalar};
use crate::error::{Error, Result};
use crate::groebner::{self, IdealSpec, MembershipCertificate};
use crate::linalg::{combinations, laplace_det};
use crate::scheme::{check_point, jacobian, jacobian_at, FpAlgebra, PolyMatrix, RationalPoint};

pub use hensel::hensel_step;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Unramified,
    SmoothOfDim(usize),
    Etale,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Unramified => write!(f, "unramified"),
            Property::SmoothOfDim(k) => write!(f, "smooth of dimension {k}"),
            Property::Etale => write!(f, "etale"),
        }
    }
}

/// `1 = Σ cofactors[i] · generators[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitCombination {
    pub generators: Vec<Polynomial>,
    pub cofactors: Vec<Polynomial>,
}

impl UnitCombination {
    pub fn expand(&self, ring: &Arc<Ring>) -> Polynomial {
        self.cofactors
            .iter()
            .zip(&self.generators)
            .fold(Polynomial::zero(ring), |acc, (q, g)| &acc + &(q * g))
    }

    pub fn verify(&self, ring: &Arc<Ring>) -> bool {
        self.cofactors.len() == self.generators.len() && self.expand(ring) == Polynomial::one(ring)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChartKind {
    Smooth,
    Unramified,
}

/// The principal open `D(G)` of a selected minor, presented on the base
/// variables plus a localization variable `Z` by `P_T, 1 - Z·G, rest`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardChart {
    pub kind: ChartKind,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub determinant: Polynomial,
    pub ring: Arc<Ring>,
    pub relations: Vec<Polynomial>,
    /// `g` with `g·G ≡ 1` in the chart algebra.
    pub inverse: Polynomial,
    /// Cofactors of `1` over `relations` followed by `G`.
    pub witness: MembershipCertificate,
}

impl StandardChart {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Relative dimension `m - n` of the chart.
    pub fn dimension(&self) -> usize {
        self.ring.nvars() - 1 - self.rows.len()
    }

    pub fn ideal(&self) -> Result<IdealSpec> {
        IdealSpec::new(&self.ring, self.relations.iter().cloned())
    }
}

/// Output of a cover extraction: charts in enumeration order and whether
/// their minors together with `I` generate the unit ideal.
#[derive(Clone, Debug)]
pub struct Cover {
    pub charts: Vec<StandardChart>,
    pub covering: bool,
    pub combination: Option<UnitCombination>,
    /// Reduced basis of `I + (G_1..G_r)` when the charts do not cover.
    pub residual: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub enum Certificate {
    UnitIdealCombination(UnitCombination),
    ChartList {
        charts: Vec<StandardChart>,
        combination: UnitCombination,
    },
    Counterexample {
        residual: Vec<Polynomial>,
        point: Option<RationalPoint>,
        tangent_dimension: Option<usize>,
    },
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub property: Property,
    pub value: bool,
    pub certificate: Certificate,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    /// Re-expands unit combinations and runs chart recognition.
    pub fn recheck(&self, a: &FpAlgebra) -> Result<bool> {
        match &self.certificate {
            Certificate::UnitIdealCombination(c) => Ok(c.verify(a.ring())),
            Certificate::ChartList { charts, combination } => {
                if !combination.verify(a.ring()) {
                    return Ok(false);
                }
                for chart in charts {
                    if !recognize_chart(a, chart)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Certificate::Counterexample { .. } => Ok(!self.value),
        }
    }
}

fn minor(jac: &PolyMatrix, rows: &[usize], cols: &[usize], ring: &Arc<Ring>) -> Polynomial {
    laplace_det(&|i, j| jac.get(i, j).clone(), rows, cols, &Polynomial::one(ring))
}

fn chart_ring(a: &FpAlgebra) -> Arc<Ring> {
    let z = a.ring().fresh_name("Z");
    a.ring().extended([z])
}

fn build_chart(a: &FpAlgebra, kind: ChartKind, rows: &[usize], cols: &[usize], g: Polynomial, ring: &Arc<Ring>) -> Result<Option<StandardChart>> {
    let rels = a.relations();
    let z = Polynomial::var(ring, ring.nvars() - 1);
    let ge = g.embed(ring);
    let loc = &Polynomial::one(ring) - &(&z * &ge);
    let selected: Vec<Polynomial> = rows.iter().map(|&i| rels[i].embed(ring)).collect();
    let rest: Vec<Polynomial> = (0..rels.len())
        .filter(|i| !rows.contains(i))
        .map(|i| rels[i].embed(ring))
        .collect();
    if kind == ChartKind::Smooth {
        let local = IdealSpec::new(ring, selected.iter().cloned().chain([loc.clone()]))?;
        let gb = groebner::groebner_basis_with(&local, &MonomialOrder::grevlex(ring.nvars()), &a.caps())?;
        for q in &rest {
            if !groebner::normal_form(q, &gb)?.is_zero() {
                return Ok(None);
            }
        }
    }
    let relations: Vec<Polynomial> = selected.into_iter().chain([loc]).chain(rest).collect();
    let ideal = IdealSpec::new(ring, relations.iter().cloned())?;
    let (inverse, witness) = groebner::unit_witness(&ge, &ideal, &a.caps())?
        .ok_or_else(|| Error::Internal("minor is not a unit on its own chart".into()))?;
    Ok(Some(StandardChart {
        kind,
        rows: rows.to_vec(),
        cols: cols.to_vec(),
        determinant: g,
        ring: ring.clone(),
        relations,
        inverse,
        witness,
    }))
}

fn extract_cover(a: &FpAlgebra, n: usize, kind: ChartKind) -> Result<Cover> {
    let jac = jacobian(a);
    let ring = chart_ring(a);
    let mut charts = Vec::new();
    for rows in combinations(a.relations().len(), n) {
        for cols in combinations(a.nvars(), n) {
            let g = minor(&jac, &rows, &cols, a.ring());
            if g.is_zero() {
                continue;
            }
            if let Some(c) = build_chart(a, kind, &rows, &cols, g, &ring)? {
                charts.push(c);
            }
        }
    }
    let generators: Vec<Polynomial> = a
        .relations()
        .iter()
        .cloned()
        .chain(charts.iter().map(|c| c.determinant.clone()))
        .collect();
    let ideal = IdealSpec::new(a.ring(), generators.iter().cloned())?;
    let one = Polynomial::one(a.ring());
    let (covering, cert) = groebner::ideal_member_with(&one, &ideal, true, &a.caps())?;
    let combination = cert.map(|c| UnitCombination {
        generators: generators.clone(),
        cofactors: c.cofactors,
    });
    let residual = if covering {
        Vec::new()
    } else {
        groebner::groebner_basis_with(&ideal, &MonomialOrder::grevlex(a.nvars()), &a.caps())?
            .basis()
            .to_vec()
    };
    Ok(Cover {
        charts,
        covering,
        combination,
        residual,
    })
}

/// Charts on every `n × n` minor with `n = m - k` whose unselected relations
/// lie in `(P_T, 1 - Z·G)`. Rows then columns, lexicographic.
pub fn cover_standard_smooth(a: &FpAlgebra, k: usize) -> Result<Cover> {
    let m = a.nvars();
    if k > m {
        return Err(Error::Invalid(format!("dimension {k} exceeds the {m} variables")));
    }
    extract_cover(a, m - k, ChartKind::Smooth)
}

/// Charts on every `m × m` minor; extra relations are kept after `1 - Z·G`.
pub fn cover_standard_unramified(a: &FpAlgebra) -> Result<Cover> {
    extract_cover(a, a.nvars(), ChartKind::Unramified)
}

fn leibniz_det(entries: &[Vec<Polynomial>], ring: &Arc<Ring>) -> Polynomial {
    let n = entries.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = Polynomial::zero(ring);
    // Heap's algorithm; the sign flips on every swap
    let mut c = vec![0usize; n];
    let mut sign = true;
    let mut term = |perm: &[usize], sign: bool| {
        let t = perm
            .iter()
            .enumerate()
            .fold(Polynomial::one(ring), |p, (i, &j)| &p * &entries[i][j]);
        acc = if sign { &acc + &t } else { &acc - &t };
    };
    term(&perm, sign);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = !sign;
            term(&perm, sign);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    acc
}

/// Independent check of a chart against its source algebra: layout of the
/// presentation, the determinant recomputed by the Leibniz formula, `G` a
/// unit in the chart algebra, the stored witness, and for smooth charts the
/// redundancy of the unselected relations.
pub fn recognize_chart(a: &FpAlgebra, chart: &StandardChart) -> Result<bool> {
    let m = a.nvars();
    let rels = a.relations();
    let n = chart.rows.len();
    let ring = &chart.ring;
    if chart.cols.len() != n
        || ring.nvars() != m + 1
        || ring.field() != a.field()
        || ring.vars()[..m] != *a.ring().vars()
        || chart.relations.len() != rels.len() + 1
        || chart.rows.windows(2).any(|w| w[0] >= w[1])
        || chart.cols.windows(2).any(|w| w[0] >= w[1])
        || chart.rows.iter().any(|&r| r >= rels.len())
        || chart.cols.iter().any(|&c| c >= m)
    {
        return Ok(false);
    }
    let block: Vec<Vec<Polynomial>> = chart
        .rows
        .iter()
        .map(|&i| {
            chart
                .cols
                .iter()
                .map(|&j| rels[i].partial_derivative(j))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let det = leibniz_det(&block, a.ring());
    if det != chart.determinant {
        return Ok(false);
    }
    let g = det.embed(ring);
    let z = Polynomial::var(ring, m);
    let rest: Vec<usize> = (0..rels.len()).filter(|i| !chart.rows.contains(i)).collect();
    let expected: Vec<Polynomial> = chart
        .rows
        .iter()
        .map(|&i| rels[i].embed(ring))
        .chain([&Polynomial::one(ring) - &(&z * &g)])
        .chain(rest.iter().map(|&i| rels[i].embed(ring)))
        .collect();
    if expected != chart.relations {
        return Ok(false);
    }
    let ideal = chart.ideal()?;
    if !groebner::is_unit_mod_with(&g, &ideal, &a.caps())? {
        return Ok(false);
    }
    if !chart.witness.verify(&Polynomial::one(ring), &ideal.with([g.clone()])?) {
        return Ok(false);
    }
    let inv_check = &(&chart.inverse * &g) - &Polynomial::one(ring);
    if !groebner::ideal_member_with(&inv_check, &ideal, false, &a.caps())?.0 {
        return Ok(false);
    }
    if chart.kind == ChartKind::Smooth {
        let local = IdealSpec::new(ring, chart.relations[..=n].iter().cloned())?;
        for q in &chart.relations[n + 1..] {
            if !groebner::ideal_member_with(q, &local, false, &a.caps())?.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

const SEARCH_CAP: u128 = 20_000;

/// A rational point on `V(ideal)` among small candidates: the whole field
/// over `F_p`, coordinates in `-2..=2` over `Q`.
fn search_point(a: &FpAlgebra, ideal: &[Polynomial]) -> Option<RationalPoint> {
    let field = a.field();
    let elems = field
        .elements()
        .unwrap_or_else(|| (-2..=2).map(|c| field.from_i64(c)).collect());
    let m = a.nvars();
    if (elems.len() as u128).saturating_pow(m as u32) > SEARCH_CAP {
        return None;
    }
    let mut idx = vec![0usize; m];
    loop {
        let coords: Vec<Scalar> = idx.iter().map(|&i| elems[i].clone()).collect();
        if ideal.iter().all(|p| p.eval(&coords).is_ok_and(|v| v.is_zero())) {
            if let Ok(p) = check_point(a, coords) {
                return Some(p);
            }
        }
        let mut k = m;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn counterexample(a: &FpAlgebra, residual: Vec<Polynomial>) -> Result<Certificate> {
    let point = search_point(a, &residual);
    let tangent_dimension = match &point {
        Some(p) => Some(jacobian_at(a, p)?.kernel_basis().len()),
        None => None,
    };
    Ok(Certificate::Counterexample {
        residual,
        point,
        tangent_dimension,
    })
}

fn field_note(field: Field) -> Option<String> {
    matches!(field, Field::Prime(_)).then(|| {
        format!("over {field} the minor criteria decide the property over the algebraic closure; lifting checks see only rational points")
    })
}

fn finish(a: &FpAlgebra, property: Property, cover: Cover, charts_in_certificate: bool) -> Result<Verdict> {
    let mut diagnostics: Vec<String> = field_note(a.field()).into_iter().collect();
    diagnostics.push(format!("{} chart(s) from nonvanishing minors", cover.charts.len()));
    let certificate = match (cover.covering, cover.combination) {
        (true, Some(combination)) if charts_in_certificate => Certificate::ChartList {
            charts: cover.charts,
            combination,
        },
        (true, Some(combination)) => Certificate::UnitIdealCombination(combination),
        (true, None) => return Err(Error::Internal("covering without certificate".into())),
        (false, _) => {
            let residual: Vec<String> = cover.residual.iter().map(|p| p.to_string()).collect();
            diagnostics.push(format!("residual ideal ({})", residual.join(", ")));
            counterexample(a, cover.residual)?
        }
    };
    let verdict = Verdict {
        property,
        value: cover.covering,
        certificate,
        diagnostics,
    };
    if verdict.value && !verdict.recheck(a)? {
        return Err(Error::Internal(format!("{property} certificate failed to recheck")));
    }
    Ok(verdict)
}

/// True iff `1 ∈ I + (all m × m Jacobian minors)`.
pub fn is_unramified(a: &FpAlgebra) -> Result<Verdict> {
    finish(a, Property::Unramified, cover_standard_unramified(a)?, false)
}

/// True iff the admissible standard smooth charts of dimension `k` cover.
pub fn is_smooth_of_dim(a: &FpAlgebra, k: usize) -> Result<Verdict> {
    finish(a, Property::SmoothOfDim(k), cover_standard_smooth(a, k)?, true)
}

/// Smooth of dimension zero.
pub fn is_etale(a: &FpAlgebra) -> Result<Verdict> {
    finish(a, Property::Etale, cover_standard_smooth(a, 0)?, true)
}

/// Scan over `k = 0..=m`: the dimensions with a true smooth verdict, plus
/// per-dimension chart counts as diagnostics.
pub fn smooth_dimensions(a: &FpAlgebra) -> Result<(Vec<usize>, Vec<String>)> {
    let mut dims = Vec::new();
    let mut notes = Vec::new();
    for k in 0..=a.nvars() {
        let cover = cover_standard_smooth(a, k)?;
        notes.push(format!(
            "k = {k}: {} admissible chart(s), covering {}",
            cover.charts.len(),
            cover.covering
        ));
        if cover.covering {
            dims.push(k);
        }
    }
    if dims.is_empty() {
        notes.push("no single dimension covers; charts of different dimensions may be needed".into());
    }
    Ok((dims, notes))
}
