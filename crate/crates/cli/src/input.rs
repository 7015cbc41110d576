//! Text forms of periodic matrices and coordinate polynomials.

use affine_schur::schur::{BasisIndex, CoordIndex};
use affine_schur::semigroup::PeriodicMatrix;
use affine_schur::{LaurentCoeff, Rational};

/// `"1,1=2; 1,4=3*a; 2,2=1"`: entries `(i, j)` with Laurent values.
pub fn parse_matrix(text: &str, n: i64) -> Result<PeriodicMatrix, String> {
    let mut g = PeriodicMatrix::zero(n);
    for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (at, val) = part
            .split_once('=')
            .ok_or_else(|| format!("expected `i,j=value`, got `{part}`"))?;
        let (i, j) = at
            .split_once(',')
            .ok_or_else(|| format!("expected `i,j` before `=`, got `{at}`"))?;
        let i: i64 = i.trim().parse().map_err(|_| format!("bad row `{}`", i.trim()))?;
        let j: i64 = j.trim().parse().map_err(|_| format!("bad column `{}`", j.trim()))?;
        let v: LaurentCoeff = val.trim().parse().map_err(|e| format!("{e}"))?;
        g.add_entry(i, j, &v);
    }
    Ok(g)
}

/// Splits at `+` and `-` outside brackets, keeping the sign with the term.
fn split_terms(text: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for c in text.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (c == '+' || c == '-') {
            if !cur.trim().is_empty() {
                out.push((neg, cur.trim().to_string()));
            }
            cur.clear();
            neg = c == '-';
            continue;
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur.trim().to_string()));
    }
    out
}

/// `"2*c[(1,1)|(1,2)] - 1/3*c[(1,2)|(2,1)]"`.
pub fn parse_polynomial(text: &str, n: i64) -> Result<Vec<(CoordIndex, Rational)>, String> {
    let mut out = Vec::new();
    for (neg, term) in split_terms(text) {
        let (coeff, mono) = match term.split_once('*') {
            Some((c, m)) => (c.trim().parse::<Rational>().map_err(|e| format!("{e}"))?, m.trim()),
            None => (Rational::one(), term.as_str()),
        };
        if !mono.starts_with("c[") {
            return Err(format!("expected a coordinate `c[(..)|(..)]`, got `{mono}`"));
        }
        let x = BasisIndex::parse_text(mono, n).map_err(|e| e.to_string())?;
        out.push((x, if neg { -coeff } else { coeff }));
    }
    if out.is_empty() {
        return Err("empty polynomial".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices() {
        let g = parse_matrix("1,1=2; 1,4 = 3*a ;2,2=1", 2).unwrap();
        assert_eq!(g.get(1, 1), LaurentCoeff::from_int(2));
        assert_eq!(g.get(3, 6), "3*a".parse().unwrap());
        assert!(parse_matrix("1=2", 2).is_err());
        assert!(parse_matrix("1,x=2", 2).is_err());
    }

    #[test]
    fn polynomials() {
        let p = parse_polynomial("2*c[(1,1)|(1,2)] - 1/3*c[(1,2)|(2,1)] + c[(1)|(3)]", 2);
        let p = p.unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[1].1, Rational::new(-1, 3));
        assert_eq!(p[2].0.r(), 1);
        assert!(parse_polynomial("2*xi[(1)|(1)]", 2).is_err());
        assert!(parse_polynomial("c[(-1)|(2)]", 2).unwrap()[0].1.is_one());
    }
}
