//! Text names for regions and symbols.
//!
//! Regions:
//!
//! ```text
//! full | empty | diagonal | offdiagonal
//! order:j0<=j2<j1[,j1!=j3...]     chains of <, <=, =, !=, >=, >
//! arcs:k0,k1,...                  arcs of a third of the circle
//! arcs/N:k0,k1,...                arcs of 1/N of the circle
//! ```
//!
//! Symbols (the arity `n + 1` comes from the context):
//!
//! ```text
//! const:c | const:re,im
//! divdiff:c0,c1,...               f^{[n]} for f = sum c_k z^k
//! phi:n,m,k[:c0,c1,...]           phi_{n,h,m,k}, h = 1 when omitted
//! phihm:m[:c0,c1,...]             phi_{h,m}
//! psi:m                           ((z0 - z1)/|z0 - z1|)^m
//! gamma:s                         |z0 - z1|^{is}
//! ```

use num_complex::Complex64;

use super::{MoiSymbol, Region, Rel};
use crate::poly::{Polynomial, SymbolPhi};
use crate::{Error, Result};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| parse_err(format!("bad {what} '{s}'")))
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| parse_err(format!("bad {what} '{s}'")))
}

pub fn parse_region(text: &str) -> Result<Region> {
    let t = text.trim();
    let (head, rest) = t.split_once(':').map_or((t, None), |(a, b)| (a, Some(b)));
    match (head, rest) {
        ("full", None) => Ok(Region::Full),
        ("empty", None) => Ok(Region::Empty),
        ("diagonal", None) => Ok(Region::Diagonal),
        ("offdiagonal", None) => Ok(Region::OffDiagonal),
        ("order", Some(body)) => parse_order(body),
        (arcs, Some(body)) if arcs == "arcs" || arcs.starts_with("arcs/") => {
            let count = match arcs.strip_prefix("arcs/") {
                Some(c) => parse_usize(c, "arc count")?,
                None => 3,
            };
            let ks = body.split(',').map(|k| parse_usize(k, "arc label")).collect::<Result<Vec<_>>>()?;
            if count == 0 || ks.iter().any(|&k| k >= count) {
                return Err(parse_err(format!("arc labels must be below {count}")));
            }
            Ok(Region::Arcs { count, ks })
        }
        _ => Err(parse_err(format!("unknown region '{text}'"))),
    }
}

fn parse_order(body: &str) -> Result<Region> {
    let mut constraints = Vec::new();
    for chain in body.split(',') {
        let tokens = tokenize_chain(chain)?;
        // tokens alternate index, relation, index, ...
        for w in tokens.windows(3).step_by(2) {
            match (&w[0], &w[1], &w[2]) {
                (Tok::Index(a), Tok::Rel(r), Tok::Index(b)) => constraints.push((*a, *r, *b)),
                _ => return Err(parse_err(format!("malformed order chain '{chain}'"))),
            }
        }
        if tokens.len() < 3 || tokens.len() % 2 == 0 {
            return Err(parse_err(format!("malformed order chain '{chain}'")));
        }
    }
    Ok(Region::order(&constraints))
}

#[derive(Debug)]
enum Tok {
    Index(usize),
    Rel(Rel),
}

fn tokenize_chain(chain: &str) -> Result<Vec<Tok>> {
    let s: Vec<char> = chain.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        if s[i] == 'j' {
            let start = i + 1;
            let mut end = start;
            while end < s.len() && s[end].is_ascii_digit() {
                end += 1;
            }
            let digits: String = s[start..end].iter().collect();
            out.push(Tok::Index(parse_usize(&digits, "index")?));
            i = end;
            continue;
        }
        let two: String = s[i..(i + 2).min(s.len())].iter().collect();
        let (rel, len) = match two.as_str() {
            "<=" => (Rel::Le, 2),
            ">=" => (Rel::Ge, 2),
            "!=" => (Rel::Ne, 2),
            "==" => (Rel::Eq, 2),
            _ => match s[i] {
                '<' => (Rel::Lt, 1),
                '>' => (Rel::Gt, 1),
                '=' => (Rel::Eq, 1),
                c => return Err(parse_err(format!("unexpected '{c}' in order chain"))),
            },
        };
        out.push(Tok::Rel(rel));
        i += len;
    }
    Ok(out)
}

fn parse_poly(s: &str) -> Result<Polynomial> {
    s.parse()
}

/// Parses a symbol name for transforms of order `n` (arity `n + 1`).
pub fn parse_symbol<'a>(text: &'a str, n: usize) -> Result<MoiSymbol> {
    let arity = n + 1;
    let t = text.trim();
    let mut parts = t.splitn(3, ':');
    let head = parts.next().unwrap_or_default();
    let a1 = parts.next();
    let a2 = parts.next();
    let need = |a: Option<&'a str>| -> Result<&'a str> {
        a.ok_or_else(|| parse_err(format!("symbol '{text}' needs an argument")))
    };
    let two_point = |sym: MoiSymbol| -> Result<MoiSymbol> {
        if arity < 2 {
            return Err(parse_err("two-point symbols need n >= 1"));
        }
        Ok(sym)
    };
    match head {
        "const" => {
            let body = need(a1)?;
            let value = match body.split_once(',') {
                Some((re, im)) => Complex64::new(parse_f64(re, "real part")?, parse_f64(im, "imaginary part")?),
                None => Complex64::new(parse_f64(body, "constant")?, 0.0),
            };
            Ok(MoiSymbol::Const { arity, value })
        }
        "divdiff" => Ok(MoiSymbol::DividedDifference { f: parse_poly(need(a1)?)?, n }),
        "phi" => {
            let nums = need(a1)?.split(',').map(|x| parse_usize(x, "phi parameter")).collect::<Result<Vec<_>>>()?;
            let [order, m, k] = nums[..] else {
                return Err(parse_err("phi expects n,m,k"));
            };
            if order != n {
                return Err(parse_err(format!("phi order {order} does not match n = {n}")));
            }
            let h = match a2 {
                Some(p) => parse_poly(p)?,
                None => Polynomial::one(),
            };
            Ok(MoiSymbol::Phi(SymbolPhi::new(order, h, m, k)?))
        }
        "phihm" => {
            if arity != 2 {
                return Err(parse_err("phihm is a two-point symbol (n = 1)"));
            }
            let m = parse_usize(need(a1)?, "m")?;
            let h = match a2 {
                Some(p) => parse_poly(p)?,
                None => Polynomial::one(),
            };
            Ok(MoiSymbol::PhiHm { h, m })
        }
        "psi" => {
            let m: i32 = need(a1)?.trim().parse().map_err(|_| parse_err("bad psi power"))?;
            two_point(MoiSymbol::Phase { arity, i: 0, j: 1, power: m })
        }
        "gamma" => {
            let s = parse_f64(need(a1)?, "gamma exponent")?;
            two_point(MoiSymbol::ModulusPower { arity, i: 0, j: 1, s })
        }
        _ => Err(parse_err(format!("unknown symbol '{text}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regions_round_trip_through_display() {
        for text in ["full", "diagonal", "offdiagonal", "order:j0<=j2<j1", "arcs/3:0,1,2"] {
            let r = parse_region(text).unwrap();
            assert_eq!(r.to_string(), text);
        }
        assert_eq!(parse_region("arcs:0,2").unwrap(), Region::Arcs { count: 3, ks: vec![0, 2] });
    }

    #[test]
    fn order_chain_parses() {
        let r = parse_region("order:j0<=j2<j1").unwrap();
        assert_eq!(r, Region::order(&[(0, Rel::Le, 2), (2, Rel::Lt, 1)]));
        assert!(parse_region("order:j0<").is_err());
        assert!(parse_region("order:j0?j1").is_err());
        assert!(parse_region("triangle").is_err());
    }

    #[test]
    fn symbols_parse() {
        assert_eq!(parse_symbol("divdiff:0,0,1", 1).unwrap().arity(), 2);
        assert_eq!(parse_symbol("phi:3,1,0:1,2", 3).unwrap().arity(), 4);
        assert!(parse_symbol("phi:2,1,0", 3).is_err());
        assert!(matches!(parse_symbol("psi:-2", 1).unwrap(), MoiSymbol::Phase { power: -2, .. }));
        assert!(matches!(parse_symbol("gamma:0.5", 1).unwrap(), MoiSymbol::ModulusPower { .. }));
        let c = parse_symbol("const:1,2", 2).unwrap();
        assert_eq!(c.eval(&[Complex64::new(1.0, 0.0); 3]), Complex64::new(1.0, 2.0));
        assert!(parse_symbol("wavelet:1", 1).is_err());
    }
}
