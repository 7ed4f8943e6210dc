use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Expression tree over the angular wavenumber `k`.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Complex64),
    K,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    /// Power with a constant real exponent.
    Pow(Box<Node>, f64),
    Abs(Box<Node>),
    Sgn(Box<Node>),
}

impl Node {
    pub fn real(x: f64) -> Node {
        Node::Const(Complex64::new(x, 0.0))
    }

    pub fn imag_unit() -> Node {
        Node::Const(Complex64::i())
    }

    pub fn add(a: Node, b: Node) -> Node {
        Node::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Node, b: Node) -> Node {
        Node::Mul(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Node) -> Node {
        Node::Neg(Box::new(a))
    }

    pub fn pow(a: Node, e: f64) -> Node {
        Node::Pow(Box::new(a), e)
    }

    pub fn abs(a: Node) -> Node {
        Node::Abs(Box::new(a))
    }

    pub fn sgn(a: Node) -> Node {
        Node::Sgn(Box::new(a))
    }

    pub fn depends_on_k(&self) -> bool {
        match self {
            Node::Const(_) => false,
            Node::K => true,
            Node::Neg(a) | Node::Pow(a, _) | Node::Abs(a) | Node::Sgn(a) => a.depends_on_k(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.depends_on_k() || b.depends_on_k()
            }
        }
    }

    /// Conservative static check that the node only takes nonnegative real values.
    pub fn is_nonnegative(&self) -> bool {
        match self {
            Node::Const(c) => c.im == 0.0 && c.re >= 0.0,
            Node::K | Node::Neg(_) | Node::Sub(..) | Node::Sgn(_) => false,
            Node::Abs(_) => true,
            Node::Add(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.is_nonnegative() && b.is_nonnegative()
            }
            Node::Pow(a, _) => a.is_nonnegative(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Const(_) | Node::K => 1,
            Node::Neg(a) | Node::Pow(a, _) | Node::Abs(a) | Node::Sgn(a) => 1 + a.depth(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Raw pointwise evaluation; may return non-finite values at singular points.
    pub fn eval_raw(&self, k: f64) -> Complex64 {
        match self {
            Node::Const(c) => *c,
            Node::K => Complex64::new(k, 0.0),
            Node::Neg(a) => -a.eval_raw(k),
            Node::Add(a, b) => a.eval_raw(k) + b.eval_raw(k),
            Node::Sub(a, b) => a.eval_raw(k) - b.eval_raw(k),
            Node::Mul(a, b) => a.eval_raw(k) * b.eval_raw(k),
            Node::Div(a, b) => complex_div(a.eval_raw(k), b.eval_raw(k)),
            Node::Pow(a, e) => power(a.eval_raw(k), *e),
            Node::Abs(a) => Complex64::new(a.eval_raw(k).norm(), 0.0),
            Node::Sgn(a) => {
                let z = a.eval_raw(k);
                if z.im == 0.0 {
                    Complex64::new(sign(z.re), 0.0)
                } else {
                    z / z.norm()
                }
            }
        }
    }

    /// Replaces every occurrence of `k` by `scale * k`.
    pub fn scale_argument(&self, scale: f64) -> Node {
        match self {
            Node::Const(c) => Node::Const(*c),
            Node::K => Node::mul(Node::real(scale), Node::K),
            Node::Neg(a) => Node::neg(a.scale_argument(scale)),
            Node::Add(a, b) => Node::add(a.scale_argument(scale), b.scale_argument(scale)),
            Node::Sub(a, b) => Node::Sub(
                Box::new(a.scale_argument(scale)),
                Box::new(b.scale_argument(scale)),
            ),
            Node::Mul(a, b) => Node::mul(a.scale_argument(scale), b.scale_argument(scale)),
            Node::Div(a, b) => Node::Div(
                Box::new(a.scale_argument(scale)),
                Box::new(b.scale_argument(scale)),
            ),
            Node::Pow(a, e) => Node::pow(a.scale_argument(scale), *e),
            Node::Abs(a) => Node::abs(a.scale_argument(scale)),
            Node::Sgn(a) => Node::sgn(a.scale_argument(scale)),
        }
    }

    fn constants_finite(&self) -> bool {
        match self {
            Node::Const(c) => c.re.is_finite() && c.im.is_finite(),
            Node::K => true,
            Node::Pow(a, e) => e.is_finite() && a.constants_finite(),
            Node::Neg(a) | Node::Abs(a) | Node::Sgn(a) => a.constants_finite(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.constants_finite() && b.constants_finite()
            }
        }
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn complex_div(a: Complex64, b: Complex64) -> Complex64 {
    if b == Complex64::new(0.0, 0.0) {
        if a == Complex64::new(0.0, 0.0) {
            Complex64::new(f64::NAN, f64::NAN)
        } else {
            Complex64::new(f64::INFINITY, 0.0)
        }
    } else {
        a / b
    }
}

fn power(base: Complex64, e: f64) -> Complex64 {
    if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
        let n = e as i32;
        if n >= 0 {
            base.powi(n)
        } else if base == Complex64::new(0.0, 0.0) {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            base.powi(n)
        }
    } else {
        // Static analysis guarantees a nonnegative real base here.
        let b = base.re;
        if b == 0.0 && e < 0.0 {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            Complex64::new(b.powf(e), 0.0)
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) => {
                if c.im == 0.0 {
                    if c.re < 0.0 {
                        write!(f, "({:?})", c.re)
                    } else {
                        write!(f, "{:?}", c.re)
                    }
                } else if c.re == 0.0 {
                    if c.im == 1.0 {
                        write!(f, "i")
                    } else {
                        write!(f, "({:?}*i)", c.im)
                    }
                } else {
                    write!(f, "({:?}+({:?})*i)", c.re, c.im)
                }
            }
            Node::K => write!(f, "k"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a}+{b})"),
            Node::Sub(a, b) => write!(f, "({a}-{b})"),
            Node::Mul(a, b) => write!(f, "{a}*{b}"),
            Node::Div(a, b) => write!(f, "{a}/({b})"),
            Node::Pow(a, e) => {
                if *e < 0.0 {
                    write!(f, "({a})^({e:?})")
                } else {
                    write!(f, "({a})^{e:?}")
                }
            }
            Node::Abs(a) => write!(f, "abs({a})"),
            Node::Sgn(a) => write!(f, "sgn({a})"),
        }
    }
}

/// Parsed multiplier symbol `l(k)` together with its source text.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolExpr {
    source: String,
    root: Node,
}

/// Offsets used to probe the symmetrized limit at a singular point.
const SINGULAR_PROBES: [f64; 3] = [1e-4, 1e-6, 1e-8];

impl SymbolExpr {
    pub fn new(source: impl Into<String>, root: Node) -> Result<Self> {
        if !root.constants_finite() {
            return Err(Error::InvalidParameter(
                "symbol contains non-finite constants".into(),
            ));
        }
        Ok(Self {
            source: source.into(),
            root,
        })
    }

    /// Builds an expression whose source text is the canonical rendering of `root`.
    pub fn from_node(root: Node) -> Result<Self> {
        let source = root.to_string();
        Self::new(source, root)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Evaluates the symbol at a single wavenumber.
    ///
    /// Non-finite values at `k = 0` are resolved by the symmetrization
    /// convention: if `(l(d) + l(-d)) / 2` tends to zero the value is 0,
    /// otherwise the point is reported as singular.
    pub fn eval(&self, k: f64) -> Result<Complex64> {
        let z = self.root.eval_raw(k);
        if z.re.is_finite() && z.im.is_finite() {
            return Ok(z);
        }
        if k != 0.0 {
            return Err(Error::Singular { k });
        }
        let mut prev = f64::INFINITY;
        for d in SINGULAR_PROBES {
            let s = 0.5 * (self.root.eval_raw(d) + self.root.eval_raw(-d));
            let m = s.norm();
            if !m.is_finite() || m > prev.max(1e-12) {
                return Err(Error::Singular { k });
            }
            prev = m;
        }
        if prev <= 1e-8 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(Error::Singular { k })
        }
    }

    /// Pointwise evaluation on a list of wavenumbers.
    pub fn eval_many(&self, wavenumbers: &[f64]) -> Result<Vec<Complex64>> {
        wavenumbers
            .iter()
            .map(|&k| {
                if !k.is_finite() {
                    return Err(Error::InvalidParameter(format!("non-finite wavenumber {k}")));
                }
                self.eval(k)
            })
            .collect()
    }

    /// Symbol of `lambda^-2 l(lambda k)`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        let root = Node::mul(Node::real(lambda.powi(-2)), self.root.scale_argument(lambda));
        Self::from_node(root)
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Evaluates `expr` on `wavenumbers`.
pub fn eval_symbol(expr: &SymbolExpr, wavenumbers: &[f64]) -> Result<Vec<Complex64>> {
    expr.eval_many(wavenumbers)
}
