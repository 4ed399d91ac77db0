use super::expr::{Applied, Expr, Func, Node};

impl Expr {
    /// Exact partial derivative with respect to the symbol `var`, simplified.
    pub fn differentiate(&self, var: &str) -> Expr {
        derivative(self, var).simplify()
    }

    /// Derivative without the final simplification pass.
    pub fn differentiate_raw(&self, var: &str) -> Expr {
        derivative(self, var)
    }
}

fn derivative(e: &Expr, var: &str) -> Expr {
    if !e.depends_on(var) {
        return Expr::zero();
    }
    match e.node() {
        Node::Const(_) => Expr::zero(),
        Node::Sym(s) => {
            if &**s == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(terms) => Expr::add(
            terms
                .iter()
                .filter(|t| t.depends_on(var))
                .map(|t| derivative(t, var))
                .collect(),
        ),
        Node::Mul(factors) => {
            let mut terms = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                if !f.depends_on(var) {
                    continue;
                }
                let mut product: Vec<Expr> = Vec::with_capacity(factors.len());
                for (j, g) in factors.iter().enumerate() {
                    if i == j {
                        product.push(derivative(f, var));
                    } else {
                        product.push(g.clone());
                    }
                }
                terms.push(Expr::mul(product));
            }
            Expr::add(terms)
        }
        Node::Div(num, den) => {
            if !den.depends_on(var) {
                return Expr::div(derivative(num, var), den.clone());
            }
            let top = derivative(num, var) * den - num * derivative(den, var);
            Expr::div(top, den.clone().powi(2))
        }
        Node::Pow(base, exponent) => {
            if !exponent.depends_on(var) {
                // e * b^(e-1) * b'
                Expr::mul(vec![
                    exponent.clone(),
                    Expr::pow(base.clone(), exponent - Expr::one()),
                    derivative(base, var),
                ])
            } else if !base.depends_on(var) {
                Expr::mul(vec![e.clone(), base.clone().ln(), derivative(exponent, var)])
            } else {
                // b^e * (e' ln b + e b'/b)
                let inner =
                    derivative(exponent, var) * base.clone().ln() + exponent * derivative(base, var) / base.clone();
                Expr::mul(vec![e.clone(), inner])
            }
        }
        Node::Func(f, arg) => {
            let inner = derivative(arg, var);
            let outer = match f {
                Func::Sin => arg.clone().cos(),
                Func::Cos => -arg.clone().sin(),
                Func::Exp => e.clone(),
                Func::Ln => Expr::pow(arg.clone(), Expr::int(-1)),
                Func::Sqrt => Expr::div(Expr::ratio(1, 2), e.clone()),
            };
            Expr::mul(vec![outer, inner])
        }
        Node::Apply(app) => {
            let mut terms = Vec::new();
            for (k, arg) in app.args.iter().enumerate() {
                if !arg.depends_on(var) {
                    continue;
                }
                let mut orders = app.orders.clone();
                orders[k] += 1;
                let partial = Expr::from_node(Node::Apply(Applied {
                    name: app.name.clone(),
                    orders,
                    args: app.args.clone(),
                }));
                terms.push(Expr::mul(vec![partial, derivative(arg, var)]));
            }
            Expr::add(terms)
        }
    }
}
