//! Closed-form asymptotic dimension bounds for mapping class groups and relatives.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CalcError {
    #[error("braid groups need n >= 3, got {0}")]
    BraidTooSmall(u32),
    #[error("Artin groups need n >= 3, got {0}")]
    ArtinTooSmall(u32),
    #[error("D must be at least 1")]
    ZeroD,
    #[error("s must be at least 1")]
    ZeroGenerators,
    #[error("value does not fit in 64 bits")]
    Overflow,
    #[error("unknown Artin family `{0}` (expected A, B, affine-A or affine-C)")]
    UnknownFamily(String),
}

/// Genus `g` with `p` punctures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Surface {
    pub g: u32,
    pub p: u32,
}

impl Surface {
    pub fn new(g: u32, p: u32) -> Self {
        Surface { g, p }
    }

    /// 3g - 3 + p.
    pub fn complexity(self) -> i64 {
        3 * self.g as i64 - 3 + self.p as i64
    }

    /// 2 - 2g - p.
    pub fn euler(self) -> i64 {
        2 - 2 * self.g as i64 - self.p as i64
    }

    fn hyperbolic(self) -> bool {
        self.euler() < 0
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{{{},{}}}", self.g, self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Upper {
    Finite(u64),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub text: String,
    pub tag: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub lower: Option<u64>,
    pub upper: Upper,
    pub exact: bool,
    pub provenance: Vec<Step>,
}

impl Bound {
    fn new() -> Self {
        Bound {
            lower: None,
            upper: Upper::Unknown,
            exact: false,
            provenance: Vec::new(),
        }
    }

    fn step(mut self, tag: &'static str, text: impl Into<String>) -> Self {
        self.provenance.push(Step {
            text: text.into(),
            tag,
        });
        self
    }

    fn exactly(mut self, v: u64) -> Self {
        self.lower = Some(v);
        self.upper = Upper::Finite(v);
        self.exact = true;
        self
    }

    fn upper(mut self, v: u64) -> Self {
        self.upper = Upper::Finite(v);
        self.exact = self.lower == Some(v);
        self
    }

    pub fn value(&self) -> Option<u64> {
        match (self.exact, self.upper) {
            (true, Upper::Finite(v)) => Some(v),
            _ => None,
        }
    }

    pub fn render(&self, subject: &str) -> String {
        let lower = self.lower.map_or("none".to_string(), |v| v.to_string());
        let upper = match self.upper {
            Upper::Finite(v) => v.to_string(),
            Upper::Unknown => "unknown".to_string(),
        };
        let mut out = format!(
            "asdim {subject} : lower={lower} upper={upper} exact={}\n",
            if self.exact { "y" } else { "n" }
        );
        for s in &self.provenance {
            out.push_str(&format!("  [{}] {}\n", s.tag, s.text));
        }
        out
    }
}

/// Virtual cohomological dimension of Mod(S_{g,p}); p <= 3 in genus 0 gives 0.
pub fn vcd_mod(s: Surface) -> u64 {
    let (g, p) = (s.g as u64, s.p as u64);
    match g {
        0 => p.saturating_sub(3),
        1 => {
            if p == 0 {
                1
            } else {
                p
            }
        }
        _ => {
            if p == 0 {
                4 * g - 5
            } else {
                4 * g - 4 + p
            }
        }
    }
}

/// asdim of the surface group; genus 0 covers the trivial and free cases.
pub fn asdim_pi1(s: Surface) -> u64 {
    match (s.g, s.p) {
        (0, p) if p <= 1 => 0,
        (0, _) => 1,
        (_, 0) => 2,
        _ => 1,
    }
}

fn pi1_step(s: Surface) -> Step {
    let text = if s.g == 0 {
        format!(
            "asdim pi1({s}) = {} (trivial or free; extension beyond the stated g >= 1 rule)",
            asdim_pi1(s)
        )
    } else {
        format!("asdim pi1({s}) = {}", asdim_pi1(s))
    };
    Step {
        text,
        tag: "surface-group",
    }
}

/// Lower bound from complexity and vcd, then the known exact cases.
pub fn asdim_mod(s: Surface) -> Bound {
    let mut b = Bound::new();
    let cx = s.complexity();
    let mut lower = None;
    if cx >= 0 {
        lower = Some(cx as u64);
        b = b.step("complexity-lower-bound", format!("asdim >= 3g-3+p = {cx}"));
    }
    if s.hyperbolic() {
        let v = vcd_mod(s);
        lower = Some(lower.map_or(v, |l: u64| l.max(v)));
        b = b.step("vcd-lower-bound", format!("asdim >= vcd = {v}"));
    }
    b.lower = lower;
    let (g, p) = (s.g as u64, s.p as u64);
    match (g, p) {
        (0, 4) => b
            .exactly(1)
            .step("sphere-four-punctures", "commensurable with PSL(2,Z), a quasi-tree: asdim = 1"),
        (0, p) if p >= 5 => {
            let mut b = b
                .exactly(p - 3)
                .step("genus-zero-formula", format!("asdim Mod(S_{{0,p}}) = p - 3 = {}", p - 3));
            b.provenance.push(pi1_step(Surface::new(0, 4)));
            b
        }
        (1, 1) => b
            .exactly(1)
            .step("once-punctured-torus", "Mod(S_{1,1}) = SL(2,Z), virtually free: asdim = 1"),
        (1, p) if p >= 1 => b
            .exactly(p)
            .step("genus-one-formula", format!("asdim Mod(S_{{1,p}}) = p = {p}")),
        (2, 0) => b.exactly(3).step(
            "genus-two-closed",
            "central Z/2 extension of Mod(S_{0,6}), so asdim <= 3 = vcd",
        ),
        (2, p) => b.exactly(p + 4).step(
            "genus-two-formula",
            format!("asdim <= asdim Mod(S_{{2,0}}) + p + 1 = {}", p + 4),
        ),
        (g, p) if g >= 3 => {
            let mut b = b.step(
                "puncture-recursion",
                format!("if asdim Mod(S_{{{g},0}}) < inf then asdim <= asdim Mod(S_{{{g},0}}) + {}", p + 1),
            );
            if p > 0 {
                b.provenance.push(pi1_step(Surface::new(s.g, 1)));
            }
            b.step("open-finiteness", format!("finiteness for closed genus {g} is open; upper unknown"))
        }
        _ => b.step("outside-scope", "outside the supported formula range"),
    }
}

/// Bound implied by the one-puncture-at-a-time recursion from a known closed-surface value.
pub fn recursion_bound(s: Surface, closed_value: u64) -> u64 {
    (0..s.p)
        .map(|q| asdim_pi1(Surface::new(s.g, q)))
        .fold(closed_value, |acc, x| acc + x)
}

pub fn braid_bound(n: u32) -> Result<Bound, CalcError> {
    if n < 3 {
        return Err(CalcError::BraidTooSmall(n));
    }
    let inner = asdim_mod(Surface::new(0, n + 1));
    let v = inner.value().expect("genus 0 with at least 4 punctures is exact");
    Ok(Bound::new().upper(v).step(
        "braid-embedding",
        format!("B_{n} embeds in Mod(S_{{0,{}}}), asdim {v} = n - 2", n + 1),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArtinFamily {
    A,
    B,
    AffineA,
    AffineC,
}

impl std::str::FromStr for ArtinFamily {
    type Err = CalcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(ArtinFamily::A),
            "B" | "b" | "C" | "c" => Ok(ArtinFamily::B),
            "affine-A" | "affine-a" => Ok(ArtinFamily::AffineA),
            "affine-C" | "affine-c" => Ok(ArtinFamily::AffineC),
            other => Err(CalcError::UnknownFamily(other.to_string())),
        }
    }
}

/// Finite types A_n, B_n: upper n. Affine types of rank n - 1: exactly n - 1.
pub fn artin_bound(family: ArtinFamily, n: u32) -> Result<Bound, CalcError> {
    if n < 3 {
        return Err(CalcError::ArtinTooSmall(n));
    }
    let n = n as u64;
    let quotient = format!("finite index in Mod(S_{{0,{}}}) with asdim {}", n + 2, n - 1);
    Ok(match family {
        ArtinFamily::A | ArtinFamily::B => Bound::new()
            .upper(n)
            .step("artin-finite-type", format!("quotient by the infinite cyclic center is {quotient}"))
            .step("extension-bound", format!("adding the center gives asdim <= {n}")),
        ArtinFamily::AffineA | ArtinFamily::AffineC => Bound::new()
            .exactly(n - 1)
            .step("artin-affine-type", format!("trivial center, the group itself is {quotient}")),
    })
}

/// Torelli group of the closed genus-g surface.
pub fn torelli(g: u32) -> Bound {
    match g {
        0 | 1 => Bound::new().exactly(0).step("torelli-trivial", "the Torelli group is trivial"),
        2 => Bound::new()
            .exactly(1)
            .step("torelli-free", "infinitely generated free subgroup of F_2 containing a bi-infinite geodesic"),
        _ => Bound::new().step(
            "torelli-equivalence",
            format!("finite exactly when asdim Mod(S_{{{g},0}}) is finite; that is open"),
        ),
    }
}

pub fn farey_asdim() -> u64 {
    1
}

/// 2D - 1 from a cover with constant D.
pub fn cover_bound(d: u64) -> Result<u64, CalcError> {
    if d == 0 {
        return Err(CalcError::ZeroD);
    }
    Ok(2 * d - 1)
}

/// 2 s^(2 delta) - 1 for a hyperbolic group with s generators.
pub fn hyperbolic_group_bound(s: u64, delta: u32) -> Result<u64, CalcError> {
    if s == 0 {
        return Err(CalcError::ZeroGenerators);
    }
    let pow = delta
        .checked_mul(2)
        .and_then(|e| s.checked_pow(e))
        .ok_or(CalcError::Overflow)?;
    pow.checked_mul(2)
        .map(|v| v - 1)
        .ok_or(CalcError::Overflow)
}
