/// Scalar scale-function driving a primary matrix function, together with
/// its derivative and domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaleFunction {
    Log,
    Exp,
    Sqrt,
    Reciprocal,
    Power(f64),
}

impl ScaleFunction {
    pub fn name(&self) -> &'static str {
        match self {
            ScaleFunction::Log => "log",
            ScaleFunction::Exp => "exp",
            ScaleFunction::Sqrt => "sqrt",
            ScaleFunction::Reciprocal => "reciprocal",
            ScaleFunction::Power(_) => "power",
        }
    }

    /// Whether f and f' are defined at `x`.
    pub fn defined_at(&self, x: f64) -> bool {
        match self {
            ScaleFunction::Log | ScaleFunction::Sqrt => x > 0.0,
            ScaleFunction::Exp => true,
            ScaleFunction::Reciprocal => x != 0.0,
            ScaleFunction::Power(p) => {
                if *p >= 1.0 && p.fract() == 0.0 {
                    true
                } else {
                    x > 0.0
                }
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ScaleFunction::Log => x.ln(),
            ScaleFunction::Exp => x.exp(),
            ScaleFunction::Sqrt => x.sqrt(),
            ScaleFunction::Reciprocal => 1.0 / x,
            ScaleFunction::Power(p) => x.powf(*p),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self {
            ScaleFunction::Log => 1.0 / x,
            ScaleFunction::Exp => x.exp(),
            ScaleFunction::Sqrt => 0.5 / x.sqrt(),
            ScaleFunction::Reciprocal => -1.0 / (x * x),
            ScaleFunction::Power(p) => p * x.powf(p - 1.0),
        }
    }
}
