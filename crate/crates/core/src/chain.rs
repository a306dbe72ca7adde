//! Names of derived scalars such as `Q;2;2` or `Ibar,a;b`: a base name
//! followed by derivative operators applied left to right.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// `;1`
    V1,
    /// `;2`
    V2,
    /// `,1`
    H1,
    /// `,2`
    H2,
    /// `;a`, with respect to the changed metric.
    Va,
    /// `;b`
    Vb,
    /// `,a`
    Ha,
    /// `,b`
    Hb,
}

impl Op {
    pub fn label(self) -> &'static str {
        match self {
            Op::V1 => ";1",
            Op::V2 => ";2",
            Op::H1 => ",1",
            Op::H2 => ",2",
            Op::Va => ";a",
            Op::Vb => ";b",
            Op::Ha => ",a",
            Op::Hb => ",b",
        }
    }

    pub fn is_barred(self) -> bool {
        matches!(self, Op::Va | Op::Vb | Op::Ha | Op::Hb)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Split `name` into its base and the operators applied to it.
pub fn split(name: &str) -> Result<(&str, Vec<Op>)> {
    let cut = name.find([';', ',']).unwrap_or(name.len());
    let base = name[..cut].trim();
    if base.is_empty() {
        return Err(Error::Config(format!("`{name}` has no base scalar")));
    }
    let rest: Vec<char> = name[cut..].chars().filter(|c| !c.is_whitespace()).collect();
    if !rest.len().is_multiple_of(2) {
        return Err(Error::Config(format!("`{name}`: dangling derivative operator")));
    }
    let ops = rest
        .chunks(2)
        .map(|pair| match (pair[0], pair[1]) {
            (';', '1') => Ok(Op::V1),
            (';', '2') => Ok(Op::V2),
            (',', '1') => Ok(Op::H1),
            (',', '2') => Ok(Op::H2),
            (';', 'a') => Ok(Op::Va),
            (';', 'b') => Ok(Op::Vb),
            (',', 'a') => Ok(Op::Ha),
            (',', 'b') => Ok(Op::Hb),
            (s, c) => Err(Error::Config(format!("`{name}`: unknown operator `{s}{c}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((base, ops))
}

/// `name` without its last operator, and that operator.
pub fn pop(name: &str) -> Result<Option<(String, Op)>> {
    let (base, ops) = split(name)?;
    Ok(ops.split_last().map(|(last, init)| {
        let mut prefix = base.to_string();
        for op in init {
            prefix.push_str(op.label());
        }
        (prefix, *last)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_chains() {
        let (b, ops) = split("Q;2;2;2;2").unwrap();
        assert_eq!(b, "Q");
        assert_eq!(ops, vec![Op::V2; 4]);
        let (b, ops) = split("Ibar,a;b").unwrap();
        assert_eq!((b, ops), ("Ibar", vec![Op::Ha, Op::Vb]));
        assert_eq!(split("I_2").unwrap(), ("I_2", vec![]));
        assert!(split(";2").is_err());
        assert!(split("P;3").is_err());
        assert!(split("P;").is_err());
        assert_eq!(pop("phi;2,1").unwrap(), Some(("phi;2".to_string(), Op::H1)));
        assert_eq!(pop("rho").unwrap(), None);
    }
}
