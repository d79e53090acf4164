use std::fmt;
use std::str::FromStr;

use crate::arith::Prime;
use crate::error::{Error, Result};

use super::PartitionType;

/// A group named by the text grammar `A[p;a1,a2,...]`, `C[m]`, `D[m]` and
/// `*`-joined free products such as `C[3]*A[3;1,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Abelian(PartitionType),
    Cyclic(u64),
    /// Dihedral group of order 2m.
    Dihedral(u64),
    FreeProduct(Vec<GroupSpec>),
}

impl GroupSpec {
    /// Builds a free product, flattening nested ones.
    pub fn free_product(parts: Vec<GroupSpec>) -> Result<GroupSpec> {
        let mut flat = vec![];
        for part in parts {
            match part {
                GroupSpec::FreeProduct(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() < 2 {
            return Err(Error::InvalidParameters("a free product needs at least two factors".into()));
        }
        Ok(GroupSpec::FreeProduct(flat))
    }

    pub fn factors(&self) -> &[GroupSpec] {
        match self {
            GroupSpec::FreeProduct(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    /// Order of a finite group; None for free products or on overflow.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupSpec::Abelian(t) => t.prime().checked_pow(t.size()),
            GroupSpec::Cyclic(m) => Some(*m),
            GroupSpec::Dihedral(m) => m.checked_mul(2),
            GroupSpec::FreeProduct(_) => None,
        }
    }
}

fn parse_factor(text: &str) -> Result<GroupSpec> {
    let bad = || Error::Parse(format!("bad group spec `{text}`"));
    let (head, rest) = text.split_once('[').ok_or_else(bad)?;
    let body = rest.strip_suffix(']').ok_or_else(bad)?;
    let number = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    match head.trim() {
        "A" => {
            let (p, parts) = body.split_once(';').ok_or_else(bad)?;
            let p = Prime::new(number(p)?)?;
            let mut parts = parts
                .split(',')
                .map(|a| number(a).and_then(|a| u32::try_from(a).map_err(|_| bad())))
                .collect::<Result<Vec<u32>>>()?;
            parts.sort_unstable_by(|a, b| b.cmp(a));
            Ok(GroupSpec::Abelian(PartitionType::new(p, parts)?))
        }
        "C" | "D" => {
            let m = number(body)?;
            if m == 0 {
                return Err(bad());
            }
            Ok(if head.trim() == "C" { GroupSpec::Cyclic(m) } else { GroupSpec::Dihedral(m) })
        }
        _ => Err(bad()),
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<GroupSpec> {
        let factors = text.split('*').map(parse_factor).collect::<Result<Vec<_>>>()?;
        if factors.len() == 1 {
            Ok(factors.into_iter().next().expect("one factor"))
        } else {
            GroupSpec::free_product(factors)
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Abelian(t) => write!(f, "{t}"),
            GroupSpec::Cyclic(m) => write!(f, "C[{m}]"),
            GroupSpec::Dihedral(m) => write!(f, "D[{m}]"),
            GroupSpec::FreeProduct(parts) => {
                let parts: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for text in ["A[2;1,1]", "C[6]", "D[5]", "C[3]*A[3;1,1]", "C[2]*C[2]*C[2]*C[2]"] {
            assert_eq!(text.parse::<GroupSpec>().unwrap().to_string(), text);
        }
        assert_eq!(" A[ 3 ; 1 , 2 ]".parse::<GroupSpec>().unwrap().to_string(), "A[3;2,1]");
        let g: GroupSpec = "C[3]*A[3;1,1]".parse().unwrap();
        assert_eq!(g.factors().len(), 2);
        assert_eq!(g.order(), None);
        assert_eq!("D[6]".parse::<GroupSpec>().unwrap().order(), Some(12));
    }

    #[test]
    fn rejects_malformed() {
        for text in ["", "A[4;1]", "A[2;]", "A[2;0]", "C[0]", "C[x]", "B[3]", "C[3", "C[3]*", "A[2,1]"] {
            assert!(text.parse::<GroupSpec>().is_err(), "{text}");
        }
    }

    #[test]
    fn flattening() {
        let inner = GroupSpec::free_product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)]).unwrap();
        let outer = GroupSpec::free_product(vec![inner, GroupSpec::Cyclic(4)]).unwrap();
        assert_eq!(outer.to_string(), "C[2]*C[3]*C[4]");
        assert!(GroupSpec::free_product(vec![GroupSpec::Cyclic(2)]).is_err());
    }
}
