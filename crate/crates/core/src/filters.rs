//! Target filter library: the six benchmark responses, constants, sampled
//! piecewise-linear responses and arbitrary closures.

use std::fmt;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The spectral domain of the normalized Laplacian.
pub const SPECTRAL_DOMAIN: (f64, f64) = (0.0, 2.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Benchmark {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
}

impl Benchmark {
    pub const ALL: [Benchmark; 6] = [
        Benchmark::F1,
        Benchmark::F2,
        Benchmark::F3,
        Benchmark::F4,
        Benchmark::F5,
        Benchmark::F6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::F1 => "f1",
            Benchmark::F2 => "f2",
            Benchmark::F3 => "f3",
            Benchmark::F4 => "f4",
            Benchmark::F5 => "f5",
            Benchmark::F6 => "f6",
        }
    }

    fn eval<T: Scalar>(self, x: T) -> T {
        let g = |a: f64, c: f64| (-T::c(a) * (x - T::c(c)).powi(2)).exp();
        match self {
            Benchmark::F1 => g(20.0, 0.5) + g(20.0, 1.5),
            Benchmark::F2 => {
                let bumps = g(100.0, 0.8) + g(100.0, 1.2);
                if x <= T::c(0.5) || x >= T::c(1.5) {
                    bumps + T::c(0.5) * (T::one() + (T::c(2.0) * T::PI() * x).cos())
                } else {
                    bumps
                }
            }
            Benchmark::F3 => g(100.0, 0.5) + g(100.0, 1.5) + T::c(1.5) * g(50.0, 1.0),
            Benchmark::F4 => g(100.0, 0.0) + g(100.0, 2.0),
            Benchmark::F5 => T::one() - g(10.0, 0.0),
            Benchmark::F6 => g(10.0, 0.4) + T::c(2.0) * g(10.0, 1.5),
        }
    }
}

impl FromStr for Benchmark {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown target filter '{s}'")))
    }
}

/// Linear interpolation through sorted samples, constant beyond the ends.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::InvalidParameter("need at least one (x, y) sample pair".into()));
        }
        if let Some(i) = xs.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedInput { index: i + 1 });
        }
        Ok(Self { xs, ys })
    }

    /// Parses `x<TAB>f(x)` lines; `#` starts a comment line.
    pub fn read<R: Read>(r: R) -> Result<Self> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (lineno, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let mut it = t.split('\t');
            let mut next = || -> Result<f64> {
                it.next()
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Format(format!("line {}: expected 'x<TAB>y'", lineno + 1)))
            };
            xs.push(next()?);
            ys.push(next()?);
        }
        Self::new(xs, ys)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read(std::fs::File::open(path)?)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let hi = self.xs.partition_point(|&v| v <= x);
        let lo = hi - 1;
        let t = (x - self.xs[lo]) / (self.xs[hi] - self.xs[lo]);
        self.ys[lo] + t * (self.ys[hi] - self.ys[lo])
    }
}

type ResponseFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A filter response `f: [lo, hi] → ℝ`, normally on the spectral domain [0, 2].
#[derive(Clone)]
pub enum TargetFilter {
    Benchmark(Benchmark),
    Constant(f64),
    Sampled(PiecewiseLinear),
    Custom {
        name: String,
        support: (f64, f64),
        response: ResponseFn,
    },
}

impl TargetFilter {
    /// Wraps a closure defined on `support`.
    pub fn custom(
        name: impl Into<String>,
        support: (f64, f64),
        response: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TargetFilter::Custom {
            name: name.into(),
            support,
            response: Arc::new(response),
        }
    }

    pub fn id(&self) -> String {
        match self {
            TargetFilter::Benchmark(b) => b.name().to_string(),
            TargetFilter::Constant(c) => format!("const({c})"),
            TargetFilter::Sampled(_) => "sampled".to_string(),
            TargetFilter::Custom { name, .. } => name.clone(),
        }
    }

    /// Interval on which the response is defined.
    pub fn support(&self) -> (f64, f64) {
        match self {
            TargetFilter::Custom { support, .. } => *support,
            _ => SPECTRAL_DOMAIN,
        }
    }

    /// Points inside the support where the response is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            TargetFilter::Benchmark(Benchmark::F2) => vec![0.5, 1.5],
            TargetFilter::Sampled(p) => p.xs.clone(),
            _ => Vec::new(),
        }
    }

    /// True when the response is identically zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, TargetFilter::Constant(c) if *c == 0.0)
    }

    /// Evaluates after checking `x` lies in the support.
    pub fn eval<T: Scalar>(&self, x: T) -> Result<T> {
        let (lo, hi) = self.support();
        let xf = x.f64();
        if !(lo..=hi).contains(&xf) {
            return Err(Error::Domain { x: xf, lo, hi });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluates without a domain check.
    pub fn eval_unchecked<T: Scalar>(&self, x: T) -> T {
        match self {
            TargetFilter::Benchmark(b) => b.eval(x),
            TargetFilter::Constant(c) => T::c(*c),
            TargetFilter::Sampled(p) => T::c(p.eval(x.f64())),
            TargetFilter::Custom { response, .. } => T::c(response(x.f64())),
        }
    }

    /// Evaluates on the support and returns zero outside it.
    pub fn eval_zero_extended<T: Scalar>(&self, x: T) -> T {
        let (lo, hi) = self.support();
        let xf = x.f64();
        if (lo..=hi).contains(&xf) {
            self.eval_unchecked(x)
        } else {
            T::zero()
        }
    }
}

impl From<Benchmark> for TargetFilter {
    fn from(b: Benchmark) -> Self {
        TargetFilter::Benchmark(b)
    }
}

impl fmt::Debug for TargetFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TargetFilter({})", self.id())
    }
}

impl FromStr for TargetFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Ok(b) = t.parse::<Benchmark>() {
            return Ok(TargetFilter::Benchmark(b));
        }
        match t {
            "zero" => Ok(TargetFilter::Constant(0.0)),
            "one" | "identity" => Ok(TargetFilter::Constant(1.0)),
            _ => Err(Error::InvalidParameter(format!("unknown target filter '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_values() {
        let f5 = TargetFilter::Benchmark(Benchmark::F5);
        assert_eq!(f5.eval(0.0f64).unwrap(), 0.0);
        let f4 = TargetFilter::Benchmark(Benchmark::F4);
        assert!((f4.eval(0.0f64).unwrap() - (1.0 + (-400.0f64).exp())).abs() < 1e-15);
        let f1 = TargetFilter::Benchmark(Benchmark::F1);
        assert!((f1.eval(0.5f64).unwrap() - (1.0 + (-20.0f64).exp())).abs() < 1e-15);
        assert!((f1.eval(0.5f64).unwrap() - 1.000_000_002_06).abs() < 1e-11);
    }

    #[test]
    fn f2_is_continuous_at_breakpoints() {
        let f2 = TargetFilter::Benchmark(Benchmark::F2);
        for b in [0.5f64, 1.5] {
            let left = f2.eval(b - 1e-12).unwrap();
            let right = f2.eval(b + 1e-12).unwrap();
            let at = f2.eval(b).unwrap();
            assert!((left - right).abs() < 1e-9);
            assert!((at - right).abs() < 1e-9);
        }
    }

    #[test]
    fn domain_is_enforced() {
        let f = TargetFilter::Benchmark(Benchmark::F1);
        assert!(matches!(f.eval(2.5f64), Err(Error::Domain { .. })));
        assert!(f.eval(-0.1f64).is_err());
        assert_eq!(f.eval_zero_extended(3.0f64), 0.0);
    }

    #[test]
    fn sampled_filter_interpolates() {
        let p = PiecewiseLinear::read("# x\tf\n0\t0\n1\t2\n2\t0\n".as_bytes()).unwrap();
        assert_eq!(p.eval(0.5), 1.0);
        assert_eq!(p.eval(1.5), 1.0);
        assert_eq!(p.eval(2.0), 0.0);
        assert!(PiecewiseLinear::new(vec![1.0, 0.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn parses_names() {
        assert_eq!("F3".parse::<Benchmark>().unwrap(), Benchmark::F3);
        assert!("f7".parse::<TargetFilter>().is_err());
        assert!("zero".parse::<TargetFilter>().unwrap().is_zero());
    }
}
