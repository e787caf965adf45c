//! Graph expression language.
//!
//! ```text
//! sum   := prod ('+' prod)*                    disjoint union
//! prod  := unary (('*' | '|' | 'x') unary)*    strong / OR / tensor product
//! unary := '~' unary | power                   complement
//! power := atom ('^' int)*                     strong power
//! atom  := K(n) | Kbar(n) | C(n) | W(n) | KG(n,r) | schlafli
//!        | M(sum) | '(' sum ')' | g6:<text> | @<path>
//! ```
//!
//! A `g6:` literal runs over the maximal span of graph6 characters, so it
//! should be followed by whitespace or the end of input.

use crate::error::{Error, Result};
use crate::graph::{self, Graph, DEFAULT_MAX_VERTICES};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Named { name: String, params: Vec<usize> },
    Literal { source: String, graph6: String },
    Complement(Box<Expr>),
    Strong(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    Union(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, usize),
    Mycielski(Box<Expr>),
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphanumeric() || c == '_' || (i == 0 && c.is_ascii_alphabetic())))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 || !rest.as_bytes()[0].is_ascii_alphabetic() {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.err("expected an integer");
        }
        let v = rest[..len].parse::<usize>().or_else(|_| self.err("integer too large"))?;
        self.pos += len;
        Ok(v)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.prod()?;
        while self.eat('+') {
            let r = self.prod()?;
            e = Expr::Union(Box::new(e), Box::new(r));
        }
        Ok(e)
    }

    fn prod(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            let op = match self.peek() {
                Some('*') => '*',
                Some('|') => '|',
                Some('x') => {
                    // `x` is the tensor operator only as a standalone word.
                    let after = self.text[self.pos + 1..].chars().next();
                    if after.is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                        return self.err("unexpected identifier");
                    }
                    'x'
                }
                _ => return Ok(e),
            };
            self.pos += 1;
            let r = self.unary()?;
            e = match op {
                '*' => Expr::Strong(Box::new(e), Box::new(r)),
                '|' => Expr::Or(Box::new(e), Box::new(r)),
                _ => Expr::Tensor(Box::new(e), Box::new(r)),
            };
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('~') {
            return Ok(Expr::Complement(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.eat('^') {
            let k = self.int()?;
            if k == 0 {
                return self.err("power exponent must be >= 1");
            }
            e = Expr::Power(Box::new(e), k);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('@') => {
                self.pos += 1;
                let rest = &self.text[self.pos..];
                let len = rest
                    .find(|c: char| c.is_whitespace() || c == ')')
                    .unwrap_or(rest.len());
                if len == 0 {
                    return self.err("expected a file path after `@`");
                }
                let path = &rest[..len];
                let content = std::fs::read_to_string(path)?;
                let line = content
                    .lines()
                    .map(str::trim)
                    .find(|l| !l.is_empty())
                    .unwrap_or("");
                Graph::from_graph6(line)?;
                self.pos += len;
                Ok(Expr::Literal {
                    source: format!("@{path}"),
                    graph6: line.trim_start_matches(">>graph6<<").to_string(),
                })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident().expect("alphabetic start");
                if name == "g6" && self.text[self.pos..].starts_with(':') {
                    self.pos += 1;
                    let rest = &self.text[self.pos..];
                    let len = rest.bytes().take_while(|b| (63..=126).contains(b)).count();
                    let lit = &rest[..len];
                    if let Err(e) = Graph::from_graph6(lit) {
                        self.pos = start;
                        return self.err(e.to_string());
                    }
                    self.pos += len;
                    return Ok(Expr::Literal {
                        source: format!("g6:{lit}"),
                        graph6: lit.to_string(),
                    });
                }
                match name {
                    "schlafli" => Ok(Expr::Named {
                        name: name.into(),
                        params: vec![],
                    }),
                    "M" => {
                        self.expect('(')?;
                        let e = self.sum()?;
                        self.expect(')')?;
                        Ok(Expr::Mycielski(Box::new(e)))
                    }
                    "K" | "Kbar" | "C" | "W" | "KG" => {
                        self.expect('(')?;
                        let mut params = vec![self.int()?];
                        while self.eat(',') {
                            params.push(self.int()?);
                        }
                        self.expect(')')?;
                        let e = Expr::Named {
                            name: name.into(),
                            params,
                        };
                        // Validate parameters early for a positioned error.
                        if let Expr::Named { name, params } = &e {
                            if let Err(err) = graph::make_named(name, params) {
                                if matches!(err, Error::SizeLimit { .. }) {
                                    return Err(err);
                                }
                                self.pos = start;
                                return self.err(err.to_string());
                            }
                        }
                        Ok(e)
                    }
                    _ => {
                        self.pos = start;
                        Err(Error::UnknownGenerator(name.to_string()))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser { text, pos: 0 };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != text.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }

    pub fn eval(&self) -> Result<Graph> {
        self.eval_limited(DEFAULT_MAX_VERTICES)
    }

    /// Evaluates with a vertex ceiling on every intermediate graph.
    pub fn eval_limited(&self, limit: usize) -> Result<Graph> {
        let g = match self {
            Expr::Named { name, params } => graph::make_named(name, params)?,
            Expr::Literal { graph6, .. } => Graph::from_graph6(graph6)?,
            Expr::Complement(a) => a.eval_limited(limit)?.complement(),
            Expr::Strong(a, b) => a.eval_limited(limit)?.strong_product_limited(&b.eval_limited(limit)?, limit)?,
            Expr::Or(a, b) => a.eval_limited(limit)?.or_product_limited(&b.eval_limited(limit)?, limit)?,
            Expr::Tensor(a, b) => a.eval_limited(limit)?.tensor_product(&b.eval_limited(limit)?)?,
            Expr::Union(a, b) => a.eval_limited(limit)?.disjoint_union(&b.eval_limited(limit)?)?,
            Expr::Power(a, k) => a.eval_limited(limit)?.strong_power_limited(*k, limit)?,
            Expr::Mycielski(a) => graph::mycielski(&a.eval_limited(limit)?),
        };
        Ok(g.with_name(self.to_string()))
    }

    /// Vertex count without building the graph.
    pub fn vertex_count(&self) -> Result<u128> {
        Ok(match self {
            Expr::Named { name, params } => match name.as_str() {
                "W" => params[0] as u128 + 1,
                "KG" => binomial(params[0], params[1]),
                "schlafli" => 27,
                _ => params[0] as u128,
            },
            Expr::Literal { graph6, .. } => Graph::from_graph6(graph6)?.n() as u128,
            Expr::Complement(a) => a.vertex_count()?,
            Expr::Strong(a, b) | Expr::Or(a, b) | Expr::Tensor(a, b) => {
                a.vertex_count()?.saturating_mul(b.vertex_count()?)
            }
            Expr::Union(a, b) => a.vertex_count()? + b.vertex_count()?,
            Expr::Power(a, k) => a.vertex_count()?.saturating_pow(*k as u32),
            Expr::Mycielski(a) => 2 * a.vertex_count()? + 1,
        })
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Union(..) => 0,
            Expr::Strong(..) | Expr::Or(..) | Expr::Tensor(..) => 1,
            Expr::Complement(_) => 2,
            Expr::Power(..) => 3,
            _ => 4,
        }
    }
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| -> fmt::Result {
            if e.prec() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Named { name, params } if params.is_empty() => write!(f, "{name}"),
            Expr::Named { name, params } => {
                let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
                write!(f, "{name}({})", ps.join(","))
            }
            Expr::Literal { source, .. } => write!(f, "{source}"),
            Expr::Complement(a) => {
                write!(f, "~")?;
                wrap(f, a, 2)
            }
            Expr::Strong(a, b) | Expr::Or(a, b) | Expr::Tensor(a, b) => {
                let op = match self {
                    Expr::Strong(..) => "*",
                    Expr::Or(..) => "|",
                    _ => "x",
                };
                wrap(f, a, 1)?;
                write!(f, " {op} ")?;
                wrap(f, b, 2)
            }
            Expr::Union(a, b) => {
                wrap(f, a, 0)?;
                write!(f, " + ")?;
                wrap(f, b, 1)
            }
            Expr::Power(a, k) => {
                wrap(f, a, 4)?;
                write!(f, "^{k}")
            }
            Expr::Mycielski(a) => write!(f, "M({a})"),
        }
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(text: &str) -> Result<Graph> {
    Expr::parse(text)?.eval()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::isomorphic;

    #[test]
    fn parse_and_print() {
        for (src, shown) in [
            ("K(5)", "K(5)"),
            ("~C(5)^2", "~C(5)^2"),
            ("(~C(5))^2", "(~C(5))^2"),
            ("C(5) * C(5) + K(3)", "C(5) * C(5) + K(3)"),
            ("M(C(5))", "M(C(5))"),
            ("KG(6, 2)", "KG(6,2)"),
            ("K(2) x K(3)", "K(2) x K(3)"),
            ("~(K(3)+K(2))", "~(K(3) + K(2))"),
        ] {
            let e = Expr::parse(src).unwrap();
            assert_eq!(e.to_string(), shown);
            assert_eq!(Expr::parse(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn evaluation() {
        let g = eval_str("C(5)^2").unwrap();
        assert_eq!((g.n(), g.is_regular()), (25, Some(8)));
        let h = eval_str("C(5) * C(5)").unwrap();
        assert_eq!(g, h);
        let u = eval_str("K(3)+K(2)+K(4)").unwrap();
        assert_eq!(u.components().len(), 3);
        let t = eval_str("K(2) x K(3)").unwrap();
        assert_eq!(t.edge_count(), 6);
        let l = eval_str("g6:DQc + K(1)").unwrap();
        assert_eq!(l.n(), 6);
        assert!(isomorphic(&eval_str("~C(5)").unwrap(), &eval_str("C(5)").unwrap()));
    }

    #[test]
    fn errors() {
        assert!(matches!(Expr::parse("Q(3)"), Err(Error::UnknownGenerator(_))));
        assert!(matches!(Expr::parse("C(2)"), Err(Error::Parse { .. })));
        assert!(matches!(Expr::parse("C(5"), Err(Error::Parse { .. })));
        assert!(matches!(Expr::parse("C(5)^0"), Err(Error::Parse { .. })));
        assert!(matches!(Expr::parse("C(5) C(5)"), Err(Error::Parse { .. })));
        assert!(matches!(Expr::parse("g6:DQ"), Err(Error::Parse { .. })));
        assert!(matches!(eval_str("K(200)^4"), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn file_literal() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.g6");
        std::fs::write(&p, ">>graph6<<DQc\n").unwrap();
        let g = eval_str(&format!("@{}", p.display())).unwrap();
        assert_eq!(g.edge_count(), 4);
    }
}
