//! Normalising functions with the extended logarithms: `log c = 1` on `[0, e)` and
//! `loglog c = 1` on `[0, e^e)`, so both are positive, nondecreasing and continuous.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_nonnegative<T: Scalar>(c: T, what: &str) -> Result<()> {
    if !(c >= T::zero()) {
        return Err(Error::Domain(format!("{what} needs a nonnegative argument, got {c}")));
    }
    Ok(())
}

pub fn log_ext<T: Scalar>(c: T) -> Result<T> {
    check_nonnegative(c, "log_ext")?;
    Ok(if c < T::E() { T::one() } else { c.ln() })
}

pub fn loglog_ext<T: Scalar>(c: T) -> Result<T> {
    check_nonnegative(c, "loglog_ext")?;
    Ok(if c < T::E().exp() { T::one() } else { c.ln().ln() })
}

/// `phi(t) = sqrt(2 loglog(t) / t)`, `t > 0`.
pub fn phi<T: Scalar>(t: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("phi needs t > 0, got {t}")));
    }
    Ok((T::of(2.0) * loglog_ext(t)? / t).sqrt())
}

/// `chi(t) = sqrt(2 t loglog t) = t phi(t)`; equals `sqrt(2t)` below `e^e`.
pub fn chi<T: Scalar>(t: T) -> Result<T> {
    Ok((T::of(2.0) * t * loglog_ext(t)?).sqrt())
}

/// Lower function `q(t) = sqrt(2t (loglog t + 1))`, kept for diagnostics.
pub fn q_lower<T: Scalar>(t: T) -> Result<T> {
    Ok((T::of(2.0) * t * (loglog_ext(t)? + T::one())).sqrt())
}

/// User-supplied normaliser `p`, checked on a probe grid for `p` nondecreasing and
/// `p(t)/t` nonincreasing.
#[derive(Clone)]
pub struct CustomEnvelope<T> {
    name: String,
    f: Arc<dyn Fn(T) -> T + Send + Sync>,
}

impl<T> fmt::Debug for CustomEnvelope<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomEnvelope").field("name", &self.name).finish()
    }
}

impl<T: Scalar> CustomEnvelope<T> {
    /// Validates on the geometric grid `probe_from * 2^k` up to `probe_to`.
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(T) -> T + Send + Sync + 'static,
        probe_from: T,
        probe_to: T,
    ) -> Result<Self> {
        let name = name.into();
        if !(probe_from > T::zero() && probe_to > probe_from) {
            return Err(Error::Argument("probe grid needs 0 < from < to".into()));
        }
        let mut t = probe_from;
        let (mut prev_p, mut prev_ratio) = (f(t), f(t) / t);
        while t < probe_to {
            t = (t * T::of(2.0)).min(probe_to);
            let p = f(t);
            let ratio = p / t;
            if !(p >= prev_p) || !(ratio <= prev_ratio) || !p.is_finite() {
                return Err(Error::Argument(format!(
                    "envelope {name} fails the monotonicity contract near t = {t}"
                )));
            }
            prev_p = p;
            prev_ratio = ratio;
        }
        Ok(Self { name, f: Arc::new(f) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

#[derive(Debug, Clone)]
pub enum Envelope<T> {
    /// `p(t) = t^{1/beta}`.
    Power { beta: T },
    Phi,
    Chi,
    Q,
    Custom(CustomEnvelope<T>),
}

impl<T: Scalar> Envelope<T> {
    pub fn eval(&self, t: T) -> Result<T> {
        match self {
            Envelope::Power { beta } => {
                check_nonnegative(t, "power envelope")?;
                Ok(t.powf(beta.recip()))
            }
            Envelope::Phi => phi(t),
            Envelope::Chi => chi(t),
            Envelope::Q => q_lower(t),
            Envelope::Custom(c) => {
                check_nonnegative(t, c.name())?;
                Ok((c.f)(t))
            }
        }
    }
}

pub fn envelope<T: Scalar>(env: &Envelope<T>, t: T) -> Result<T> {
    env.eval(t)
}
