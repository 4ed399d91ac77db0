use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact constant type used inside expression trees.
pub type Rational = num_rational::BigRational;

/// Elementary functions understood by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// A named but unspecified function such as `Omega(r, s)`, possibly
/// differentiated: `orders[k]` counts derivatives taken in argument slot `k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Applied {
    pub name: Arc<str>,
    pub orders: Vec<u32>,
    pub args: Vec<Expr>,
}

impl Applied {
    pub fn is_underived(&self) -> bool {
        self.orders.iter().all(|&o| o == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Const(Rational),
    Sym(Arc<str>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Div(Expr, Expr),
    Pow(Expr, Expr),
    Func(Func, Expr),
    Apply(Applied),
}

/// Immutable, cheaply clonable expression tree.
///
/// Constructors build the tree as written; canonical ordering and folding
/// only happen in [`Expr::simplify`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn rational(q: Rational) -> Expr {
        Expr::from_node(Node::Const(q))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::rational(Rational::new(num.into(), den.into()))
    }

    /// Exact rational for a finite `f64` (binary expansion, not decimal).
    pub fn from_f64(x: f64) -> Option<Expr> {
        Rational::from_float(x).map(Expr::rational)
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn sym(name: &str) -> Expr {
        Expr::from_node(Node::Sym(Arc::from(name)))
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::from_node(Node::Add(terms)),
        }
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        match factors.len() {
            0 => Expr::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Expr::from_node(Node::Mul(factors)),
        }
    }

    /// Quotient node; a quotient of two constants folds to a constant.
    #[allow(clippy::should_implement_trait)]
    pub fn div(num: Expr, den: Expr) -> Expr {
        if let (Node::Const(a), Node::Const(b)) = (num.node(), den.node()) {
            if !b.is_zero() {
                return Expr::rational(a / b);
            }
        }
        Expr::from_node(Node::Div(num, den))
    }

    pub fn pow(base: Expr, exponent: Expr) -> Expr {
        Expr::from_node(Node::Pow(base, exponent))
    }

    pub fn powi(self, n: i64) -> Expr {
        Expr::pow(self, Expr::int(n))
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::from_node(Node::Func(f, arg))
    }

    pub fn sin(self) -> Expr {
        Expr::func(Func::Sin, self)
    }

    pub fn cos(self) -> Expr {
        Expr::func(Func::Cos, self)
    }

    pub fn exp(self) -> Expr {
        Expr::func(Func::Exp, self)
    }

    pub fn ln(self) -> Expr {
        Expr::func(Func::Ln, self)
    }

    pub fn sqrt(self) -> Expr {
        Expr::func(Func::Sqrt, self)
    }

    /// Opaque function applied to `args`, underived.
    pub fn apply(name: &str, args: Vec<Expr>) -> Expr {
        let orders = vec![0; args.len()];
        Expr::from_node(Node::Apply(Applied {
            name: Arc::from(name),
            orders,
            args,
        }))
    }

    /// Opaque function of plain coordinate symbols, e.g. `Omega(r, s)`.
    pub fn function_of(name: &str, vars: &[&str]) -> Expr {
        Expr::apply(name, vars.iter().map(|v| Expr::sym(v)).collect())
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_one())
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self.node() {
            Node::Const(_) | Node::Sym(_) => Vec::new(),
            Node::Add(xs) | Node::Mul(xs) => xs.iter().collect(),
            Node::Div(a, b) | Node::Pow(a, b) => vec![a, b],
            Node::Func(_, a) => vec![a],
            Node::Apply(app) => app.args.iter().collect(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Expr::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Expr::depth).max().unwrap_or(0)
    }

    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        if let Node::Sym(s) = self.node() {
            out.insert(s.to_string());
        }
        for c in self.children() {
            c.collect_symbols(out);
        }
    }

    /// Names of opaque functions appearing anywhere in the tree.
    pub fn opaque_functions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_functions(&mut out);
        out
    }

    fn collect_functions(&self, out: &mut BTreeSet<String>) {
        if let Node::Apply(app) = self.node() {
            out.insert(app.name.to_string());
        }
        for c in self.children() {
            c.collect_functions(out);
        }
    }

    pub fn depends_on(&self, var: &str) -> bool {
        match self.node() {
            Node::Sym(s) => &**s == var,
            _ => self.children().into_iter().any(|c| c.depends_on(var)),
        }
    }

    /// Rebuild with every child mapped through `f`.
    pub fn map_children(&self, mut f: impl FnMut(&Expr) -> Expr) -> Expr {
        match self.node() {
            Node::Const(_) | Node::Sym(_) => self.clone(),
            Node::Add(xs) => Expr::from_node(Node::Add(xs.iter().map(&mut f).collect())),
            Node::Mul(xs) => Expr::from_node(Node::Mul(xs.iter().map(&mut f).collect())),
            Node::Div(a, b) => Expr::from_node(Node::Div(f(a), f(b))),
            Node::Pow(a, b) => Expr::from_node(Node::Pow(f(a), f(b))),
            Node::Func(g, a) => Expr::func(*g, f(a)),
            Node::Apply(app) => Expr::from_node(Node::Apply(Applied {
                name: app.name.clone(),
                orders: app.orders.clone(),
                args: app.args.iter().map(&mut f).collect(),
            })),
        }
    }

    /// Simultaneous replacement of symbols.
    pub fn substitute(&self, map: &BTreeMap<String, Expr>) -> Expr {
        if map.is_empty() {
            return self.clone();
        }
        match self.node() {
            Node::Sym(s) => map.get(&**s).cloned().unwrap_or_else(|| self.clone()),
            _ => self.map_children(|c| c.substitute(map)),
        }
    }

    pub fn substitute_one(&self, name: &str, value: &Expr) -> Expr {
        let mut map = BTreeMap::new();
        map.insert(name.to_string(), value.clone());
        self.substitute(&map)
    }

    /// Replace every application of the opaque function `name` (and its
    /// derivatives) by the concrete `body` written over `params`.
    pub fn substitute_function(&self, name: &str, params: &[String], body: &Expr) -> Expr {
        match self.node() {
            Node::Apply(app) if &*app.name == name && app.args.len() == params.len() => {
                let mut derived = body.clone();
                for (param, &order) in params.iter().zip(&app.orders) {
                    for _ in 0..order {
                        derived = derived.differentiate(param);
                    }
                }
                let args: BTreeMap<String, Expr> = params
                    .iter()
                    .cloned()
                    .zip(app.args.iter().map(|a| a.substitute_function(name, params, body)))
                    .collect();
                derived.substitute(&args)
            }
            _ => self.map_children(|c| c.substitute_function(name, params, body)),
        }
    }
}

/// Concrete definition for an opaque function symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDef {
    pub params: Vec<String>,
    pub body: Expr,
}

impl FunctionDef {
    pub fn new(params: &[&str], body: Expr) -> FunctionDef {
        FunctionDef {
            params: params.iter().map(|p| p.to_string()).collect(),
            body,
        }
    }
}

/// Substitute every definition in `defs` into `e`.
pub fn realize(e: &Expr, defs: &BTreeMap<String, FunctionDef>) -> Expr {
    defs.iter().fold(e.clone(), |acc, (name, def)| {
        acc.substitute_function(name, &def.params, &def.body)
    })
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<&Expr> for Expr {
    fn from(e: &Expr) -> Expr {
        e.clone()
    }
}

fn negate(e: Expr) -> Expr {
    match e.node() {
        Node::Const(q) => Expr::rational(-q.clone()),
        _ => Expr::mul(vec![Expr::int(-1), e]),
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<R: Into<Expr>> ops::$trait<R> for Expr {
            type Output = Expr;
            fn $method(self, rhs: R) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs.into())
            }
        }
        impl<R: Into<Expr>> ops::$trait<R> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: R) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs.into())
            }
        }
    };
}

binary_op!(Add, add, |a, b| Expr::add(vec![a, b]));
binary_op!(Sub, sub, |a, b| Expr::add(vec![a, negate(b)]));
binary_op!(Mul, mul, |a, b| Expr::mul(vec![a, b]));
binary_op!(Div, div, Expr::div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        negate(self)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        negate(self.clone())
    }
}

// Rendering. The output re-parses to a structurally equal tree, so every
// parenthesisation below mirrors a decision in the parser.

fn render_rational(q: &Rational) -> String {
    if q.is_integer() {
        return q.numer().to_string();
    }
    if let Some(dec) = terminating_decimal(q) {
        return dec;
    }
    format!("({}/{})", q.numer(), q.denom())
}

fn terminating_decimal(q: &Rational) -> Option<String> {
    let mut den = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    if digits > 40 {
        return None;
    }
    let scale = BigInt::from(10).pow(digits);
    let scaled = (q * Rational::from_integer(scale)).to_integer();
    let neg = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    let digits = digits as usize;
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let split = s.len() - digits;
    let out = format!("{}.{}", &s[..split], &s[split..]);
    Some(if neg { format!("-{out}") } else { out })
}

/// True when `e` renders as a single token the parser reads as a primary.
fn is_atomic(e: &Expr) -> bool {
    match e.node() {
        Node::Const(q) => !q.is_negative() && render_rational(q).chars().all(|c| c != '('),
        Node::Sym(_) | Node::Func(..) | Node::Apply(_) => true,
        _ => false,
    }
}

fn render_term_level(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if matches!(e.node(), Node::Add(_)) {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(q) => f.write_str(&render_rational(q)),
            Node::Sym(s) => f.write_str(s),
            Node::Add(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    let negated = match t.node() {
                        Node::Mul(fs)
                            if i > 0
                                && fs.len() == 2
                                && fs[0].as_const().is_some_and(|q| *q == -Rational::one())
                                && fs[1].as_const().is_none() =>
                        {
                            Some(&fs[1])
                        }
                        _ => None,
                    };
                    match negated {
                        Some(inner) => {
                            f.write_str(" - ")?;
                            render_term_level(inner, f)?;
                        }
                        None => {
                            if i > 0 {
                                f.write_str(" + ")?;
                            }
                            render_term_level(t, f)?;
                        }
                    }
                }
                Ok(())
            }
            Node::Mul(factors) => {
                for (i, x) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    let wrap = match x.node() {
                        Node::Add(_) | Node::Mul(_) => true,
                        Node::Div(..) => i > 0,
                        _ => false,
                    };
                    if wrap {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            Node::Div(num, den) => {
                match num.node() {
                    Node::Add(_) => write!(f, "({num})")?,
                    _ => write!(f, "{num}")?,
                }
                f.write_str("/")?;
                let wrap = matches!(den.node(), Node::Add(_) | Node::Mul(_) | Node::Div(..));
                if wrap {
                    write!(f, "({den})")
                } else {
                    write!(f, "{den}")
                }
            }
            Node::Pow(base, exponent) => {
                if is_atomic(base) {
                    write!(f, "{base}")?;
                } else {
                    write!(f, "({base})")?;
                }
                f.write_str("^")?;
                if is_atomic(exponent) || exponent.as_const().is_some() {
                    write!(f, "{exponent}")
                } else {
                    write!(f, "({exponent})")
                }
            }
            Node::Func(g, arg) => write!(f, "{}({arg})", g.name()),
            Node::Apply(app) => {
                f.write_str(&app.name)?;
                if !app.is_underived() {
                    f.write_str("[")?;
                    for (i, o) in app.orders.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{o}")?;
                    }
                    f.write_str("]")?;
                }
                f.write_str("(")?;
                for (i, a) in app.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Integer value of a rational, if it is one and fits in an `i64`.
pub(crate) fn small_integer(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}
