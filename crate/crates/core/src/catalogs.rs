//! Closed-form special cases: Verlinde bundles on Jacobians and box
//! products on products of abelian varieties. Each comes with a
//! constructor of `(model, bundle, eta)` so the closed forms can be checked
//! against the general `rho` engine.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bundles::{creg, BundleDescriptor};
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::nsmodel::{AbelianModel, NsClass, Positivity};
use crate::regularity::{rho, rho_of_matrices, RhoOptions};
use crate::{ExactField, Rational};

/// The Verlinde bundle `E_{r,k}` on the Jacobian of a genus-`g` curve,
/// polarized by `s·Θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VerlindeSpec {
    pub genus: u32,
    pub rank: u64,
    pub level: u64,
    pub theta_power: i64,
}

impl VerlindeSpec {
    pub fn new(genus: u32, rank: u64, level: u64, theta_power: i64) -> Result<Self> {
        let spec = Self { genus, rank, level, theta_power };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.genus == 0 || self.rank == 0 || self.level == 0 {
            return Err(Error::NonPositiveVerlindeData);
        }
        let h = self.rank.gcd(&self.level);
        if h.is_multiple_of(2) {
            return Err(Error::EvenGcd { rank: self.rank, level: self.level, gcd: h });
        }
        if self.theta_power < 2 {
            return Err(Error::ThetaPowerTooSmall(self.theta_power));
        }
        Ok(())
    }

    pub fn gcd(&self) -> u64 {
        self.rank.gcd(&self.level)
    }

    /// `k / (r s)`.
    fn ratio(&self) -> Rational {
        Rational::from_int(self.level as i64) / Rational::from_int(self.rank as i64 * self.theta_power)
    }
}

/// `⌈g − k/(rs)⌉`.
pub fn verlinde_creg(spec: &VerlindeSpec) -> Result<i64> {
    spec.validate()?;
    (Rational::from_int(spec.genus as i64) - spec.ratio())
        .ceil_i64()
        .ok_or(Error::Overflow("verlinde ceiling"))
}

/// The simple semihomogeneous bundle `W_{a,b}` (with `a = r/h`, `b = k/h`,
/// `h = gcd(r, k)`) that carries the continuous regularity of `E_{r,k}`.
#[derive(Clone, Debug)]
pub struct VerlindeData {
    pub model: Arc<AbelianModel<Rational>>,
    pub bundle: BundleDescriptor<Rational>,
    pub eta: NsClass<Rational>,
    pub a: u64,
    pub b: u64,
}

/// Jacobian model with `Θ` the `g × g` identity; bundle of rank `a^g` and
/// `c1 = a^{g−1} b Θ`; `eta = s Θ`.
pub fn verlinde_descriptor(spec: &VerlindeSpec) -> Result<VerlindeData> {
    spec.validate()?;
    let h = spec.gcd();
    let (a, b) = (spec.rank / h, spec.level / h);
    let g = spec.genus;
    let rank = a.checked_pow(g).ok_or(Error::Overflow("verlinde rank"))?;
    let c1_coeff = a
        .checked_pow(g - 1)
        .and_then(|x| x.checked_mul(b))
        .and_then(|x| i64::try_from(x).ok())
        .ok_or(Error::Overflow("verlinde determinant"))?;
    let model = AbelianModel::principally_polarized(g as usize, "Theta");
    let theta = NsClass::generator(&model, 0);
    let bundle = BundleDescriptor::new(rank, theta.scale(&Rational::from_int(c1_coeff)))?
        .with_label(format!("W_{{{a},{b}}}"));
    let eta = theta.scale(&Rational::from_int(spec.theta_power));
    Ok(VerlindeData { model, bundle, eta, a, b })
}

/// Continuous regularity of `W_{a,b}` computed by the general engine.
pub fn verlinde_engine_creg(spec: &VerlindeSpec) -> Result<i64> {
    let data = verlinde_descriptor(spec)?;
    creg(&data.bundle, &data.eta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegBounds {
    pub lower: i64,
    pub upper: i64,
    /// `k < rs`, where the two bounds coincide.
    pub exact: bool,
}

/// `⌈g − k/(rs)⌉ ≤ reg(E_{r,k}, O(sΘ)) ≤ g`.
pub fn verlinde_reg_bounds(spec: &VerlindeSpec) -> Result<RegBounds> {
    let lower = verlinde_creg(spec)?;
    let upper = spec.genus as i64;
    let exact = (spec.level as i128) < spec.rank as i128 * spec.theta_power as i128;
    if exact {
        assert_eq!(lower, upper, "k < rs forces the lower bound up to g");
    }
    Ok(RegBounds { lower, upper, exact })
}

/// One factor `(A_j, F_j, O_{A_j}(1))` of a box product.
#[derive(Clone, Debug)]
pub struct ProductFactor {
    pub bundle: BundleDescriptor<Rational>,
    pub polarization: NsClass<Rational>,
}

impl ProductFactor {
    pub fn new(bundle: BundleDescriptor<Rational>, polarization: NsClass<Rational>) -> Result<Self> {
        bundle.c1().check_same(&polarization)?;
        if polarization.positivity() != Positivity::Ample {
            return Err(Error::NotAmple);
        }
        Ok(Self { bundle, polarization })
    }

    pub fn model(&self) -> &Arc<AbelianModel<Rational>> {
        self.polarization.model()
    }

    /// An elliptic curve with point class `P = [[1]]`, bundle of the given
    /// rank and slope, polarization of the given degree.
    pub fn elliptic(rank: u64, slope: &Rational, degree: &Rational) -> Result<Self> {
        let model = AbelianModel::new(1, vec![("P".to_string(), HermitianMatrix::identity(1))])?;
        let p = NsClass::generator(&model, 0);
        let c1 = p.scale(&(Rational::from_int(rank as i64) * slope.clone()));
        Self::new(BundleDescriptor::new(rank, c1)?, p.scale(degree))
    }

    /// `(slope, degree)` when the factor is an elliptic curve.
    pub fn elliptic_data(&self) -> Option<(Rational, Rational)> {
        if self.model().dim() != 1 {
            return None;
        }
        let slope = self.bundle.slope_class().to_matrix().get(0, 0).re.clone();
        let degree = self.polarization.to_matrix().get(0, 0).re.clone();
        Some((slope, degree))
    }
}

/// Pairwise non-isogenous factors, by declaration.
#[derive(Clone, Debug)]
pub struct ProductSpec {
    pub factors: Vec<ProductFactor>,
}

impl ProductSpec {
    pub fn new(factors: Vec<ProductFactor>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::TooFewFactors(factors.len()));
        }
        Ok(Self { factors })
    }
}

#[derive(Clone, Debug)]
pub struct ProductData {
    pub model: Arc<AbelianModel<Rational>>,
    pub bundle: BundleDescriptor<Rational>,
    pub eta: NsClass<Rational>,
}

/// Block-embeds the factor models into one model of dimension `Σ g_j`.
///
/// The box product has rank `Π r_j` and
/// `c1 = Σ_j (Π_{l≠j} r_l) · c1(F_j)` (each pulled back to its block);
/// the polarization is the sum of the pulled-back factor polarizations.
pub fn product_model(spec: &ProductSpec) -> Result<ProductData> {
    if spec.factors.len() < 2 {
        return Err(Error::TooFewFactors(spec.factors.len()));
    }
    let dims: Vec<usize> = spec.factors.iter().map(|f| f.model().dim()).collect();
    let total: usize = dims.iter().sum();
    let rank = spec
        .factors
        .iter()
        .try_fold(1u64, |acc, f| acc.checked_mul(f.bundle.rank()))
        .ok_or(Error::Overflow("product rank"))?;

    let mut basis = Vec::new();
    let mut c1 = Vec::new();
    let mut eta = Vec::new();
    let mut offset = 0;
    for (j, f) in spec.factors.iter().enumerate() {
        if f.bundle.c1().dim() != dims[j] || f.polarization.dim() != dims[j] {
            return Err(Error::DimensionMismatch { expected: dims[j], found: f.bundle.c1().dim() });
        }
        let cofactor = Rational::from_int((rank / f.bundle.rank()) as i64);
        for (k, (name, gen)) in f.model().basis().iter().enumerate() {
            let blocks: Vec<HermitianMatrix<Rational>> = dims
                .iter()
                .enumerate()
                .map(|(l, &d)| if l == j { gen.clone() } else { HermitianMatrix::zeros(d) })
                .collect();
            basis.push((format!("A{}.{}", j + 1, name), HermitianMatrix::block_diagonal(&blocks)));
            c1.push(f.bundle.c1().coeffs()[k].clone() * cofactor.clone());
            eta.push(f.polarization.coeffs()[k].clone());
        }
        offset += dims[j];
    }
    debug_assert_eq!(offset, total);
    let model = AbelianModel::new(total, basis)?;
    let bundle = BundleDescriptor::new(rank, NsClass::new(&model, c1)?)?;
    let eta = NsClass::new(&model, eta)?;
    Ok(ProductData { model, bundle, eta })
}

/// Continuous regularity on `E_1 × E_2` from the factor regularities:
/// `max(min(m1, m2) + 1, max(m1, m2))`.
pub fn elliptic_product_creg(m1: i64, m2: i64) -> i64 {
    (m1.min(m2) + 1).max(m1.max(m2))
}

/// Continuous regularity of a bundle of the given slope on an elliptic
/// curve polarized in the given degree: `⌈1 − slope/degree⌉`.
///
/// Panics if the closed form disagrees with the `rho` engine on the 1×1
/// model, which would indicate a defect in one of them.
pub fn elliptic_factor_creg(slope: &Rational, degree: &Rational) -> Result<i64> {
    if degree <= &Rational::zero() {
        return Err(Error::NonPositiveDegree(degree.to_string()));
    }
    let closed = (Rational::one() - slope.clone() / degree.clone())
        .ceil_i64()
        .ok_or(Error::Overflow("elliptic ceiling"))?;
    let engine = rho_of_matrices(
        &HermitianMatrix::from_real_diagonal(vec![slope.clone()]),
        &HermitianMatrix::from_real_diagonal(vec![degree.clone()]),
        &RhoOptions::default(),
    )?
    .value;
    assert_eq!(closed, engine, "elliptic closed form disagrees with rho on slope {slope}, degree {degree}");
    Ok(closed)
}

/// Closed-form regularity of a two-factor elliptic product from its factor
/// data, when the spec is of that shape.
pub fn product_formula(spec: &ProductSpec) -> Result<Option<i64>> {
    if spec.factors.len() != 2 {
        return Ok(None);
    }
    let mut ms = Vec::with_capacity(2);
    for f in &spec.factors {
        let Some((slope, degree)) = f.elliptic_data() else {
            return Ok(None);
        };
        ms.push(elliptic_factor_creg(&slope, &degree)?);
    }
    Ok(Some(elliptic_product_creg(ms[0], ms[1])))
}

/// `creg` of the box product via the general engine.
pub fn product_creg(spec: &ProductSpec) -> Result<i64> {
    let data = product_model(spec)?;
    Ok(rho(&data.bundle.slope_class(), &data.eta)?.value)
}
