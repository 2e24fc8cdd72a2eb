use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::C64;

/// Named constellation families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstellationKind {
    /// The single symbol `+1` (M = 1): only the support carries data.
    Unit,
    Bpsk,
    Qpsk,
    /// M-ary PSK with points `exp(j (2 pi m + pi) / M)`.
    Psk,
}

/// Ordered unit-energy alphabet `{b_1, .., b_M}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: ConstellationKind,
    symbols: Vec<C64>,
}

impl Constellation {
    pub fn unit() -> Self {
        Constellation { kind: ConstellationKind::Unit, symbols: vec![C64::new(1.0, 0.0)] }
    }

    /// `{+1, -1}`.
    pub fn bpsk() -> Self {
        Constellation { kind: ConstellationKind::Bpsk, symbols: vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)] }
    }

    /// `{e^{j pi/4}, e^{j 3pi/4}, e^{j 5pi/4}, e^{j 7pi/4}}`.
    pub fn qpsk() -> Self {
        Constellation { kind: ConstellationKind::Qpsk, symbols: psk_points(4) }
    }

    /// M-PSK for `M >= 4`.
    pub fn psk(m: usize) -> Result<Self> {
        if m < 4 {
            return Err(invalid(format!("M-PSK needs M >= 4, got {m}; use unit or bpsk")));
        }
        Ok(Constellation { kind: ConstellationKind::Psk, symbols: psk_points(m) })
    }

    /// Parses `unit`, `bpsk`, `qpsk` or `<M>psk`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "unit" | "1" => Ok(Self::unit()),
            "bpsk" => Ok(Self::bpsk()),
            "qpsk" => Ok(Self::qpsk()),
            other => other
                .strip_suffix("psk")
                .and_then(|m| m.parse().ok())
                .ok_or_else(|| invalid(format!("unknown constellation {other:?}")))
                .and_then(Self::psk),
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            ConstellationKind::Unit => "unit".into(),
            ConstellationKind::Bpsk => "bpsk".into(),
            ConstellationKind::Qpsk => "qpsk".into(),
            ConstellationKind::Psk => format!("{}psk", self.len()),
        }
    }

    pub fn kind(&self) -> ConstellationKind {
        self.kind
    }

    pub fn symbols(&self) -> &[C64] {
        &self.symbols
    }

    /// Alphabet size `M`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, index: usize) -> C64 {
        self.symbols[index]
    }

    /// `floor(log2 M)` bits select one symbol.
    pub fn bits_per_symbol(&self) -> usize {
        (usize::BITS - 1 - self.len().leading_zeros()) as usize
    }

    pub fn is_real(&self) -> bool {
        self.symbols.iter().all(|s| s.im == 0.0)
    }

    /// Index of the symbol closest to `z`; ties go to the lowest index.
    pub fn nearest(&self, z: C64) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, s) in self.symbols.iter().enumerate() {
            let d = (z - s).norm_sqr();
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }
}

fn psk_points(m: usize) -> Vec<C64> {
    (0..m).map(|k| C64::from_polar(1.0, (2.0 * k as f64 + 1.0) * PI / m as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_energy_and_distinct() {
        for c in [Constellation::unit(), Constellation::bpsk(), Constellation::qpsk(), Constellation::psk(8).unwrap()] {
            for (i, a) in c.symbols().iter().enumerate() {
                assert!((a.norm() - 1.0).abs() < 1e-12);
                for b in &c.symbols()[i + 1..] {
                    assert!((a - b).norm() > 1e-6);
                }
            }
        }
    }

    #[test]
    fn qpsk_points() {
        let q = Constellation::qpsk();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [(h, h), (-h, h), (-h, -h), (h, -h)];
        for (s, (re, im)) in q.symbols().iter().zip(expected) {
            assert!((s.re - re).abs() < 1e-15 && (s.im - im).abs() < 1e-15);
        }
        assert_eq!(q.bits_per_symbol(), 2);
        assert!(!q.is_real());
    }

    #[test]
    fn names_round_trip() {
        for name in ["unit", "bpsk", "qpsk", "8psk"] {
            assert_eq!(Constellation::from_name(name).unwrap().name(), name);
        }
        assert!(Constellation::from_name("16qam").is_err());
        assert_eq!(Constellation::unit().bits_per_symbol(), 0);
    }

    #[test]
    fn nearest_symbol() {
        let q = Constellation::qpsk();
        assert_eq!(q.nearest(C64::new(-0.1, -3.0)), 2);
        assert_eq!(Constellation::bpsk().nearest(C64::new(-0.2, 5.0)), 1);
    }
}
