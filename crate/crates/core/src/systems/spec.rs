//! Textual system specifications.
//!
//! ```text
//! spec   := ident [':' param {',' param}]
//!         | 'product(' spec ',' spec ')'
//!         | 'power(' spec ',' integer ')'
//! param  := key '=' value
//! value  := decimal | a/b | golden | word over {0,1,*}
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::symbolic::ToeplitzWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Rotation,
    Doubling,
    TorusShear,
    MorseSmale,
    Denjoy,
    AnnulusTransient,
    Pinched,
    Sturmian,
    Toeplitz,
    ThueMorse,
    Product,
    Power,
}

impl Kind {
    pub const ALL: [Kind; 12] = [
        Kind::Rotation,
        Kind::Doubling,
        Kind::TorusShear,
        Kind::MorseSmale,
        Kind::Denjoy,
        Kind::AnnulusTransient,
        Kind::Pinched,
        Kind::Sturmian,
        Kind::Toeplitz,
        Kind::ThueMorse,
        Kind::Product,
        Kind::Power,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Rotation => "rotation",
            Kind::Doubling => "doubling",
            Kind::TorusShear => "torus_shear",
            Kind::MorseSmale => "morse_smale",
            Kind::Denjoy => "denjoy",
            Kind::AnnulusTransient => "annulus_transient",
            Kind::Pinched => "pinched",
            Kind::Sturmian => "sturmian",
            Kind::Toeplitz => "toeplitz",
            Kind::ThueMorse => "thue_morse",
            Kind::Product => "product",
            Kind::Power => "power",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Symbolic systems live on a sequence space with the Cantor metric.
    pub fn is_symbolic(self) -> bool {
        matches!(self, Kind::Sturmian | Kind::Toeplitz | Kind::ThueMorse)
    }

    /// `(key, default)` pairs in canonical order. `None` marks a required key.
    fn params(self) -> &'static [(&'static str, Option<&'static str>)] {
        match self {
            Kind::Rotation | Kind::Sturmian => &[("alpha", None)],
            Kind::Denjoy => &[("alpha", Some("golden")), ("mass", Some("2/3"))],
            Kind::Pinched => &[("alpha", None), ("eps", Some("0")), ("omega", Some("golden"))],
            Kind::Toeplitz => &[("m", None), ("v", None)],
            _ => &[],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(Real),
    Word(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(r) => write!(f, "{r}"),
            Value::Word(w) => f.write_str(w),
        }
    }
}

/// A validated system description. Parameters are stored in canonical order
/// with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub kind: Kind,
    pub params: Vec<(String, Value)>,
    pub children: Vec<SystemSpec>,
    /// Exponent for `power(spec, m)`; 1 otherwise.
    pub power: u32,
}

impl SystemSpec {
    pub fn parse(text: &str) -> Result<SystemSpec> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        p.skip_ws();
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(spec)
    }

    pub fn leaf(kind: Kind, params: &[(&str, &str)]) -> Result<SystemSpec> {
        let raw = params.iter().map(|(k, v)| (k.to_string(), v.to_string(), 0)).collect();
        SystemSpec::validated(kind, raw)
    }

    pub fn product(a: SystemSpec, b: SystemSpec) -> SystemSpec {
        SystemSpec { kind: Kind::Product, params: Vec::new(), children: vec![a, b], power: 1 }
    }

    pub fn power_of(base: SystemSpec, m: u32) -> Result<SystemSpec> {
        if !(1..=64).contains(&m) {
            return Err(Error::Domain { name: "m".into(), msg: "power must be in 1..=64".into() });
        }
        Ok(SystemSpec { kind: Kind::Power, params: Vec::new(), children: vec![base], power: m })
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn real(&self, key: &str) -> Option<Real> {
        match self.get(key)? {
            Value::Real(r) => Some(*r),
            Value::Word(_) => None,
        }
    }

    pub fn word(&self, key: &str) -> Option<&str> {
        match self.get(key)? {
            Value::Word(w) => Some(w),
            Value::Real(_) => None,
        }
    }

    /// The Toeplitz word of a `toeplitz` spec.
    pub fn toeplitz_word(&self) -> Option<ToeplitzWord> {
        if self.kind != Kind::Toeplitz {
            return None;
        }
        let m = self.real("m")?.value as usize;
        ToeplitzWord::new(m, self.word("v")?).ok()
    }

    /// True when every leaf is symbolic.
    pub fn is_symbolic(&self) -> bool {
        match self.kind {
            Kind::Product | Kind::Power => self.children.iter().all(SystemSpec::is_symbolic),
            k => k.is_symbolic(),
        }
    }

    fn validated(kind: Kind, raw: Vec<(String, String, usize)>) -> Result<SystemSpec> {
        let allowed = kind.params();
        for (key, _, pos) in &raw {
            if !allowed.iter().any(|(k, _)| k == key) {
                return Err(Error::Domain {
                    name: key.clone(),
                    msg: format!("`{kind}` takes no parameter `{key}` (at position {pos})"),
                });
            }
        }
        for (i, (key, _, _)) in raw.iter().enumerate() {
            if raw[..i].iter().any(|(k, _, _)| k == key) {
                return Err(Error::Domain { name: key.clone(), msg: "given twice".into() });
            }
        }
        let mut params = Vec::with_capacity(allowed.len());
        for &(key, default) in allowed {
            let text = match (raw.iter().find(|(k, _, _)| k == key), default) {
                (Some((_, v, _)), _) => v.clone(),
                (None, Some(d)) => d.to_string(),
                (None, None) => {
                    return Err(Error::MissingParam { kind: kind.name().into(), name: key.into() })
                }
            };
            let value = if kind == Kind::Toeplitz && key == "v" {
                Value::Word(text)
            } else {
                Value::Real(Real::parse(&text).map_err(|_| Error::Domain {
                    name: key.into(),
                    msg: format!("`{text}` is not a number"),
                })?)
            };
            params.push((key.to_string(), value));
        }
        let spec = SystemSpec { kind, params, children: Vec::new(), power: 1 };
        spec.check_domains()?;
        Ok(spec)
    }

    fn check_domains(&self) -> Result<()> {
        let dom = |name: &str, msg: &str| Error::Domain { name: name.into(), msg: msg.into() };
        let unit_open = |key: &str| -> Result<()> {
            let v = self.real(key).expect("present").value;
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(dom(key, "must lie in (0,1)"))
            }
        };
        match self.kind {
            Kind::Rotation | Kind::Sturmian => unit_open("alpha")?,
            Kind::Denjoy => {
                unit_open("alpha")?;
                unit_open("mass")?;
            }
            Kind::Pinched => {
                if self.real("alpha").unwrap().value <= 0.0 {
                    return Err(dom("alpha", "must be positive"));
                }
                if self.real("eps").unwrap().value < 0.0 {
                    return Err(dom("eps", "must be non-negative"));
                }
                unit_open("omega")?;
            }
            Kind::Toeplitz => {
                let m = self.real("m").unwrap();
                if m.ratio.is_none_or(|(n, d)| d != 1 || !(1..=64).contains(&n)) {
                    return Err(dom("m", "must be an integer in 1..=64"));
                }
                ToeplitzWord::new(m.value as usize, self.word("v").unwrap())
                    .map_err(|e| dom("v", &e.to_string()))?;
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Product => write!(f, "product({},{})", self.children[0], self.children[1]),
            Kind::Power => write!(f, "power({},{})", self.children[0], self.power),
            kind => {
                f.write_str(kind.name())?;
                for (i, (k, v)) in self.params.iter().enumerate() {
                    f.write_str(if i == 0 { ":" } else { "," })?;
                    write!(f, "{k}={v}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for SystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<SystemSpec> {
        SystemSpec::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c == b' ' || c == b'\t') {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_lowercase() || c == b'_' || (self.pos > start && c.is_ascii_digit())) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn value(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || b"./*-_".contains(&c)) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a value"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    /// Whether the input continues with `ident '='`.
    fn at_param(&self) -> bool {
        let mut i = self.pos;
        while self.src.get(i).is_some_and(|c| *c == b' ') {
            i += 1;
        }
        let start = i;
        while self.src.get(i).is_some_and(|c| c.is_ascii_lowercase() || *c == b'_' || c.is_ascii_digit()) {
            i += 1;
        }
        while self.src.get(i).is_some_and(|c| *c == b' ') {
            i += 1;
        }
        i > start && self.src.get(i) == Some(&b'=')
    }

    fn spec(&mut self) -> Result<SystemSpec> {
        let name = self.ident()?;
        let kind = Kind::from_name(&name).ok_or_else(|| Error::UnknownKind(name.clone()))?;
        match kind {
            Kind::Product => {
                self.expect(b'(')?;
                let a = self.spec()?;
                self.expect(b',')?;
                let b = self.spec()?;
                self.expect(b')')?;
                Ok(SystemSpec::product(a, b))
            }
            Kind::Power => {
                self.expect(b'(')?;
                let base = self.spec()?;
                self.expect(b',')?;
                let at = self.pos;
                let m = self.value()?;
                let m: u32 = m.parse().map_err(|_| Error::Syntax { pos: at, msg: "power needs an integer".into() })?;
                self.expect(b')')?;
                SystemSpec::power_of(base, m)
            }
            kind => {
                let mut raw = Vec::new();
                self.skip_ws();
                if self.peek() == Some(b':') {
                    self.pos += 1;
                    loop {
                        let at = self.pos;
                        let key = self.ident()?;
                        self.expect(b'=')?;
                        let value = self.value()?;
                        raw.push((key, value, at));
                        self.skip_ws();
                        if self.peek() == Some(b',') {
                            let save = self.pos;
                            self.pos += 1;
                            if self.at_param() {
                                continue;
                            }
                            self.pos = save;
                        }
                        break;
                    }
                }
                SystemSpec::validated(kind, raw)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rotation() {
        let s = SystemSpec::parse("rotation:alpha=0.6180339887").unwrap();
        assert_eq!(s.kind, Kind::Rotation);
        assert!((s.real("alpha").unwrap().value - 0.6180339887).abs() < 1e-15);
    }

    #[test]
    fn parses_pinched_with_golden() {
        let s = SystemSpec::parse("pinched:alpha=3,eps=0.05,omega=golden").unwrap();
        assert_eq!(s.real("alpha").unwrap().value, 3.0);
        assert_eq!(s.real("eps").unwrap().value, 0.05);
        assert!((s.real("omega").unwrap().value - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert_eq!(s.to_string(), "pinched:alpha=3,eps=0.05,omega=golden");
    }

    #[test]
    fn parses_nested_product() {
        let s = SystemSpec::parse("product(rotation:alpha=0.30103,doubling)").unwrap();
        assert_eq!(s.kind, Kind::Product);
        assert_eq!(s.children[0].kind, Kind::Rotation);
        assert_eq!(s.children[1].kind, Kind::Doubling);
        assert_eq!(s.to_string(), "product(rotation:alpha=0.30103,doubling)");
    }

    #[test]
    fn parses_extensions() {
        let s = SystemSpec::parse("power(sturmian:alpha=golden,2)").unwrap();
        assert_eq!(s.power, 2);
        let t = SystemSpec::parse("toeplitz:m=3,v=*1*").unwrap();
        assert_eq!(t.toeplitz_word().unwrap().to_string(), "0001*1*");
        let p = SystemSpec::parse("product(toeplitz:m=1,v=*,thue_morse)").unwrap();
        assert!(p.is_symbolic());
    }

    #[test]
    fn defaults_are_filled() {
        let s = SystemSpec::parse("pinched:alpha=3").unwrap();
        assert_eq!(s.to_string(), "pinched:alpha=3,eps=0,omega=golden");
        let d = SystemSpec::parse("denjoy").unwrap();
        assert_eq!(d.to_string(), "denjoy:alpha=golden,mass=2/3");
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(SystemSpec::parse("spinner"), Err(Error::UnknownKind(_))));
        assert!(matches!(SystemSpec::parse("rotation:alpha=1.5"), Err(Error::Domain { .. })));
        assert!(matches!(SystemSpec::parse("rotation"), Err(Error::MissingParam { .. })));
        assert!(matches!(SystemSpec::parse("pinched:alpha=-1"), Err(Error::Domain { .. })));
        assert!(matches!(SystemSpec::parse("pinched:alpha=3,eps=-0.1"), Err(Error::Domain { .. })));
        assert!(matches!(SystemSpec::parse("doubling:alpha=0.5"), Err(Error::Domain { .. })));
        match SystemSpec::parse("product(doubling doubling)") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 17),
            other => panic!("{other:?}"),
        }
        assert!(matches!(SystemSpec::parse("rotation:alpha=0.5)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn round_trips() {
        for text in [
            "rotation:alpha=1/3",
            "product(product(rotation:alpha=golden,doubling),torus_shear)",
            "power(toeplitz:m=3,v=*1*,3)",
            "annulus_transient",
        ] {
            let s = SystemSpec::parse(text).unwrap();
            assert_eq!(SystemSpec::parse(&s.to_string()).unwrap(), s);
        }
    }
}
