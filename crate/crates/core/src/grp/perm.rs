use std::fmt;
use std::str::FromStr;

use super::GrpError;

/// Largest supported permutation degree.
pub const MAX_DEGREE: usize = 16;

/// A permutation of `{0, …, n-1}` stored inline. `images[i]` is the image of
/// point `i`; cycle notation at the boundary is 1-based.
///
/// Ordering is lexicographic on the image array, which makes sorted element
/// lists canonical.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: [u8; MAX_DEGREE],
    n: u8,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DEGREE, "degree {n} exceeds {MAX_DEGREE}");
        let mut images = [0u8; MAX_DEGREE];
        for (i, x) in images.iter_mut().enumerate().take(n) {
            *x = i as u8;
        }
        Perm { images, n: n as u8 }
    }

    pub fn from_images(images: &[usize]) -> Result<Self, GrpError> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(GrpError::DegreeTooLarge(n));
        }
        let mut seen = [false; MAX_DEGREE];
        let mut out = [0u8; MAX_DEGREE];
        for (i, &x) in images.iter().enumerate() {
            if x >= n || seen[x] {
                return Err(GrpError::NotBijection);
            }
            seen[x] = true;
            out[i] = x as u8;
        }
        Ok(Perm { images: out, n: n as u8 })
    }

    /// Parses 1-based cycle notation such as `"(1 2 3)(4 5)"` in degree `n`.
    pub fn from_cycles(s: &str, n: usize) -> Result<Self, GrpError> {
        if n > MAX_DEGREE {
            return Err(GrpError::DegreeTooLarge(n));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut moved = vec![false; n];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(GrpError::MalformedCycle(s.to_string()));
            };
            let Some(close) = body.find(')') else {
                return Err(GrpError::MalformedCycle(s.to_string()));
            };
            let inner = &body[..close];
            if inner.contains('(') {
                return Err(GrpError::MalformedCycle(s.to_string()));
            }
            let mut points = Vec::new();
            for tok in inner.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let x: usize = tok.parse().map_err(|_| GrpError::MalformedCycle(s.to_string()))?;
                if x == 0 || x > n {
                    return Err(GrpError::PointOutOfRange { point: x, degree: n });
                }
                if moved[x - 1] {
                    return Err(GrpError::MalformedCycle(s.to_string()));
                }
                moved[x - 1] = true;
                points.push(x - 1);
            }
            for w in 0..points.len() {
                images[points[w]] = points[(w + 1) % points.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images[..self.n as usize]
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.n, other.n);
        let mut images = [0u8; MAX_DEGREE];
        for (i, x) in images.iter_mut().enumerate().take(self.n as usize) {
            *x = self.images[other.images[i] as usize];
        }
        Perm { images, n: self.n }
    }

    pub fn try_compose(&self, other: &Perm) -> Result<Perm, GrpError> {
        if self.n != other.n {
            return Err(GrpError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> Perm {
        let mut images = [0u8; MAX_DEGREE];
        for i in 0..self.n as usize {
            images[self.images[i] as usize] = i as u8;
        }
        Perm { images, n: self.n }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n as usize).all(|i| self.images[i] as usize == i)
    }

    /// Cycle lengths, including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycle_type().iter().map(|l| l - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.sign() == 1
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycle_type().into_iter().fold(1u64, |acc, l| acc / gcd(acc, l as u64) * l as u64)
    }

    pub fn pow(&self, e: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        for _ in 0..e {
            acc = acc.compose(self);
        }
        acc
    }

    /// Extends to a larger degree by fixing the new points.
    pub fn extend(&self, n: usize) -> Perm {
        assert!(n >= self.degree() && n <= MAX_DEGREE);
        let mut p = Perm::identity(n);
        p.images[..self.n as usize].copy_from_slice(self.images());
        p
    }

    /// 4 bits per point; injective for a fixed degree.
    pub fn pack(&self) -> u64 {
        self.images().iter().enumerate().fold(0u64, |acc, (i, &x)| acc | (u64::from(x) << (4 * i)))
    }

    pub fn to_cycles(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            out.push('(');
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&(x + 1).to_string());
                first = false;
                x = self.apply(x);
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycles())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycles())
    }
}

/// Parses `"<degree>:<cycles>"`, e.g. `"5:(1 2 3)"`.
impl FromStr for Perm {
    type Err = GrpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (deg, cycles) = s.split_once(':').ok_or_else(|| GrpError::MalformedCycle(s.to_string()))?;
        let n = deg.trim().parse().map_err(|_| GrpError::MalformedCycle(s.to_string()))?;
        Perm::from_cycles(cycles, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_examples() {
        let t = Perm::from_cycles("(1 2)", 4).unwrap();
        assert!(t.compose(&t).is_identity());
        assert_eq!(Perm::from_cycles("(1 2)(3 4)", 4).unwrap().sign(), 1);
        let c = Perm::from_cycles("(1 2 3)", 5).unwrap();
        assert_eq!(c.images(), &[1, 2, 0, 3, 4]);
        assert_eq!(c.to_cycles(), "(1 2 3)");
        assert_eq!(Perm::identity(3).to_cycles(), "()");
        assert_eq!(Perm::from_cycles("()", 3).unwrap(), Perm::identity(3));
        assert_eq!(Perm::from_cycles("(1,3)", 3).unwrap().to_cycles(), "(1 3)");
    }

    #[test]
    fn malformed_cycles() {
        assert!(Perm::from_cycles("(1 2", 3).is_err());
        assert!(Perm::from_cycles("1 2)", 3).is_err());
        assert!(Perm::from_cycles("(1 1)", 3).is_err());
        assert!(Perm::from_cycles("(1 2)(2 3)", 3).is_err());
        assert!(matches!(
            Perm::from_cycles("(1 4)", 3),
            Err(GrpError::PointOutOfRange { point: 4, degree: 3 })
        ));
        assert!(Perm::from_cycles("(0 1)", 3).is_err());
        let a = Perm::identity(3);
        let b = Perm::identity(4);
        assert_eq!(a.try_compose(&b), Err(GrpError::DegreeMismatch(3, 4)));
    }

    #[test]
    fn parse_with_degree_prefix() {
        let p: Perm = "6:(1 2)(5 6)".parse().unwrap();
        assert_eq!(p.degree(), 6);
        assert_eq!(p.order(), 2);
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(&v).unwrap())
    }

    proptest! {
        #[test]
        fn cycle_notation_round_trips(p in arb_perm(9)) {
            prop_assert_eq!(Perm::from_cycles(&p.to_cycles(), 9).unwrap(), p);
        }

        #[test]
        fn sign_is_a_homomorphism(a in arb_perm(7), b in arb_perm(7)) {
            prop_assert_eq!(a.compose(&b).sign(), a.sign() * b.sign());
            prop_assert!(a.compose(&a.inverse()).is_identity());
            prop_assert!(a.pow(a.order()).is_identity());
        }
    }
}
