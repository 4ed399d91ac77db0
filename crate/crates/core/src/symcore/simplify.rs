//! Canonicalising rewrite system.
//!
//! Sums and products are flattened and their operands kept in the total
//! order of [`Expr`]; numeric coefficients of sums are collected per term,
//! exponents of products per base. Quotients become negative powers and
//! `sqrt(x)` becomes `x^(1/2)`. A pass is repeated until it reaches a fixed
//! point, which makes [`Expr::simplify`] idempotent.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::expr::{small_integer, Applied, Expr, Func, Node, Rational};

const MAX_PASSES: usize = 32;
const EXPAND_LIMIT: usize = 4096;

impl Expr {
    pub fn simplify(&self) -> Expr {
        let mut current = simplify_once(self);
        for _ in 0..MAX_PASSES {
            let next = simplify_once(&current);
            if next == current {
                return current;
            }
            current = next;
        }
        current
    }

    /// Distribute products over sums (and small positive integer powers of
    /// sums), then simplify.
    pub fn expand(&self) -> Expr {
        expand_once(&self.simplify()).simplify()
    }
}

fn simplify_once(e: &Expr) -> Expr {
    match e.node() {
        Node::Const(_) | Node::Sym(_) => e.clone(),
        Node::Add(terms) => build_add(terms.iter().map(simplify_once).collect()),
        Node::Mul(factors) => build_mul(factors.iter().map(simplify_once).collect()),
        Node::Div(num, den) => build_mul(vec![simplify_once(num), build_pow(simplify_once(den), Expr::int(-1))]),
        Node::Pow(base, exponent) => build_pow(simplify_once(base), simplify_once(exponent)),
        Node::Func(f, arg) => build_func(*f, simplify_once(arg)),
        Node::Apply(app) => Expr::from_node(Node::Apply(Applied {
            name: app.name.clone(),
            orders: app.orders.clone(),
            args: app.args.iter().map(simplify_once).collect(),
        })),
    }
}

fn one() -> Rational {
    Rational::one()
}

/// Split a canonical term into numeric coefficient and the remaining key.
fn split_coefficient(term: &Expr) -> (Rational, Expr) {
    match term.node() {
        Node::Const(q) => (q.clone(), Expr::one()),
        Node::Mul(fs) => match fs[0].node() {
            Node::Const(q) => (q.clone(), Expr::mul(fs[1..].to_vec())),
            _ => (one(), term.clone()),
        },
        _ => (one(), term.clone()),
    }
}

fn with_coefficient(c: &Rational, key: &Expr) -> Expr {
    if key.is_one() {
        return Expr::rational(c.clone());
    }
    if c.is_one() {
        return key.clone();
    }
    let mut fs = vec![Expr::rational(c.clone())];
    match key.node() {
        Node::Mul(inner) => fs.extend(inner.iter().cloned()),
        _ => fs.push(key.clone()),
    }
    Expr::from_node(Node::Mul(fs))
}

fn factors_of(key: &Expr) -> Vec<Expr> {
    match key.node() {
        Node::Mul(fs) => fs.clone(),
        _ if key.is_one() => Vec::new(),
        _ => vec![key.clone()],
    }
}

fn accumulate(collected: &mut BTreeMap<Expr, Rational>, c: Rational, key: Expr) {
    if let Node::Add(inner) = key.node() {
        // numeric multiples of a sum are distributed so their terms can cancel
        for t in inner {
            let (ci, ki) = split_coefficient(t);
            accumulate(collected, &c * ci, ki);
        }
        return;
    }
    let slot = collected.entry(key).or_insert_with(Rational::zero);
    *slot += c;
}

fn build_add(terms: Vec<Expr>) -> Expr {
    let mut collected: BTreeMap<Expr, Rational> = BTreeMap::new();
    let mut stack = terms;
    stack.reverse();
    while let Some(t) = stack.pop() {
        match t.node() {
            Node::Add(inner) => stack.extend(inner.iter().rev().cloned()),
            _ => {
                let (c, key) = split_coefficient(&t);
                if !c.is_zero() {
                    accumulate(&mut collected, c, key);
                }
            }
        }
    }
    collected.retain(|_, c| !c.is_zero());
    apply_pythagorean(&mut collected);

    let mut out = Vec::with_capacity(collected.len());
    for (key, c) in &collected {
        out.push(with_coefficient(c, key));
    }
    Expr::add(out)
}

/// `a*sin(u)^2*X + b*cos(u)^2*X  ->  b*X + (a - b)*sin(u)^2*X`.
fn apply_pythagorean(collected: &mut BTreeMap<Expr, Rational>) {
    loop {
        let mut rewrite = None;
        'search: for (key, c_sin) in collected.iter() {
            let fs = factors_of(key);
            for (i, f) in fs.iter().enumerate() {
                let Node::Pow(base, exponent) = f.node() else {
                    continue;
                };
                let (Node::Func(Func::Sin, u), Some(q)) = (base.node(), exponent.as_const()) else {
                    continue;
                };
                if *q != Rational::from_integer(2.into()) {
                    continue;
                }
                let mut rest = fs.clone();
                rest.remove(i);
                let cos_sq = Expr::pow(Expr::func(Func::Cos, u.clone()), Expr::int(2));
                let mut partner = rest.clone();
                partner.push(cos_sq);
                let partner = build_mul(partner);
                if let Some(c_cos) = collected.get(&partner) {
                    rewrite = Some((key.clone(), c_sin.clone(), partner, c_cos.clone(), build_mul(rest)));
                    break 'search;
                }
            }
        }
        let Some((sin_key, c_sin, cos_key, c_cos, rest)) = rewrite else {
            return;
        };
        collected.remove(&cos_key);
        let remaining = &c_sin - &c_cos;
        if remaining.is_zero() {
            collected.remove(&sin_key);
        } else {
            collected.insert(sin_key, remaining);
        }
        let (c_rest, key_rest) = split_coefficient(&rest);
        accumulate(collected, c_cos * c_rest, key_rest);
        collected.retain(|_, c| !c.is_zero());
    }
}

fn build_mul(factors: Vec<Expr>) -> Expr {
    let mut coefficient = one();
    let mut powers: BTreeMap<Expr, Vec<Expr>> = BTreeMap::new();
    let mut stack = factors;
    stack.reverse();
    while let Some(f) = stack.pop() {
        match f.node() {
            Node::Mul(inner) => stack.extend(inner.iter().rev().cloned()),
            Node::Const(q) => {
                if q.is_zero() {
                    return Expr::zero();
                }
                coefficient *= q;
            }
            Node::Pow(base, exponent) => powers.entry(base.clone()).or_default().push(exponent.clone()),
            _ => powers.entry(f.clone()).or_default().push(Expr::one()),
        }
    }

    let mut rest = Vec::with_capacity(powers.len());
    let mut reprocess = Vec::new();
    for (base, exponents) in powers {
        let exponent = if exponents.len() == 1 {
            exponents.into_iter().next().unwrap()
        } else {
            build_add(exponents)
        };
        let p = build_pow(base, exponent);
        match p.node() {
            Node::Const(q) => {
                if q.is_zero() {
                    return Expr::zero();
                }
                coefficient *= q;
            }
            Node::Mul(_) => reprocess.push(p),
            _ => rest.push(p),
        }
    }
    if !reprocess.is_empty() {
        rest.extend(reprocess);
        rest.push(Expr::rational(coefficient));
        return build_mul(rest);
    }
    if coefficient.is_zero() {
        return Expr::zero();
    }
    if !coefficient.is_one() || rest.is_empty() {
        rest.insert(0, Expr::rational(coefficient));
    }
    Expr::mul(rest)
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    (r.pow(k) == *n).then_some(r)
}

fn rational_power(c: &Rational, q: &Rational) -> Option<Rational> {
    if let Some(n) = small_integer(q) {
        let n = i32::try_from(n).ok()?;
        if c.is_zero() && n < 0 {
            return None;
        }
        if c.numer().bits().saturating_mul(n.unsigned_abs() as u64) > 4096
            || c.denom().bits().saturating_mul(n.unsigned_abs() as u64) > 4096
        {
            return None;
        }
        return Some(num_traits::pow::Pow::pow(c.clone(), n));
    }
    if !c.is_positive() {
        return None;
    }
    let k = u32::try_from(q.denom().clone()).ok()?;
    let p = i32::try_from(q.numer().clone()).ok()?;
    let root = Rational::new(exact_root(c.numer(), k)?, exact_root(c.denom(), k)?);
    if p < 0 && root.is_zero() {
        return None;
    }
    Some(num_traits::pow::Pow::pow(root, p))
}

fn build_pow(base: Expr, exponent: Expr) -> Expr {
    if let Some(q) = exponent.as_const() {
        if q.is_zero() {
            return Expr::one();
        }
        if q.is_one() {
            return base;
        }
        let integer = q.is_integer();
        match base.node() {
            Node::Const(c) => {
                if let Some(v) = rational_power(c, q) {
                    return Expr::rational(v);
                }
            }
            Node::Pow(inner, e2) if integer => {
                return build_pow(inner.clone(), build_mul(vec![e2.clone(), exponent.clone()]));
            }
            Node::Mul(fs) if integer => {
                return build_mul(fs.iter().map(|f| build_pow(f.clone(), exponent.clone())).collect());
            }
            Node::Func(Func::Exp, x) if integer => {
                return build_func(Func::Exp, build_mul(vec![exponent.clone(), x.clone()]));
            }
            _ => {}
        }
    }
    if base.is_one() {
        return Expr::one();
    }
    if base.is_zero() && exponent.as_const().is_some_and(|q| q.is_positive()) {
        return Expr::zero();
    }
    Expr::pow(base, exponent)
}

fn leading_negative(e: &Expr) -> bool {
    match e.node() {
        Node::Const(q) => q.is_negative(),
        Node::Mul(fs) => fs[0].as_const().is_some_and(|q| q.is_negative()),
        _ => false,
    }
}

fn negated(e: &Expr) -> Expr {
    build_mul(vec![Expr::int(-1), e.clone()])
}

fn build_func(f: Func, arg: Expr) -> Expr {
    match f {
        Func::Sin => {
            if arg.is_zero() {
                return Expr::zero();
            }
            if leading_negative(&arg) {
                return negated(&build_func(Func::Sin, negated(&arg)));
            }
        }
        Func::Cos => {
            if arg.is_zero() {
                return Expr::one();
            }
            if leading_negative(&arg) {
                return build_func(Func::Cos, negated(&arg));
            }
        }
        Func::Exp => {
            if arg.is_zero() {
                return Expr::one();
            }
            if let Node::Func(Func::Ln, x) = arg.node() {
                return x.clone();
            }
        }
        Func::Ln => {
            if arg.is_one() {
                return Expr::zero();
            }
            if let Node::Func(Func::Exp, x) = arg.node() {
                return x.clone();
            }
        }
        Func::Sqrt => return build_pow(arg, Expr::ratio(1, 2)),
    }
    Expr::func(f, arg)
}

fn terms_of(e: &Expr) -> Vec<Expr> {
    match e.node() {
        Node::Add(ts) => ts.clone(),
        _ => vec![e.clone()],
    }
}

fn expand_once(e: &Expr) -> Expr {
    let e = e.map_children(expand_once);
    match e.node() {
        Node::Mul(fs) => {
            let width: usize = fs.iter().map(|f| terms_of(f).len()).product();
            if width <= 1 || width > EXPAND_LIMIT {
                return e;
            }
            let mut acc = vec![Expr::one()];
            for f in fs {
                let ts = terms_of(f);
                let mut next = Vec::with_capacity(acc.len() * ts.len());
                for a in &acc {
                    for t in &ts {
                        next.push(build_mul(vec![a.clone(), t.clone()]));
                    }
                }
                acc = next;
            }
            build_add(acc)
        }
        Node::Pow(base, exponent) => {
            let n = exponent.as_const().and_then(small_integer);
            match (base.node(), n) {
                (Node::Add(ts), Some(n)) if (2..=8).contains(&n) && ts.len().pow(n as u32) <= EXPAND_LIMIT => {
                    let factors = vec![base.clone(); n as usize];
                    expand_once(&Expr::from_node(Node::Mul(factors)))
                }
                _ => e,
            }
        }
        _ => e,
    }
}
