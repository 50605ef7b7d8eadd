use super::{Graph, GraphError};

/// Chord offsets of an LCF description, repeated `repeat` times around a
/// Hamiltonian cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcfSpec {
    pub chords: Vec<i64>,
    pub repeat: usize,
}

impl LcfSpec {
    pub fn new(chords: Vec<i64>, repeat: usize) -> Result<Self, GraphError> {
        let spec = LcfSpec { chords, repeat };
        spec.validate()?;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.chords.len() * self.repeat
    }

    fn chord_at(&self, i: usize) -> i64 {
        self.chords[i % self.chords.len()]
    }

    fn target(&self, i: usize) -> usize {
        let n = self.n() as i64;
        ((i as i64 + self.chord_at(i)) % n + n) as usize % self.n()
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.chords.is_empty() {
            return Err(GraphError::LcfInvalid("no chords".into()));
        }
        if self.repeat == 0 {
            return Err(GraphError::LcfInvalid("repeat must be positive".into()));
        }
        let n = self.n();
        if n < 3 {
            return Err(GraphError::LcfInvalid(format!("{n} vertices, need at least 3")));
        }
        for &c in &self.chords {
            if c == 0 || c.unsigned_abs() as usize >= n {
                return Err(GraphError::LcfInvalid(format!(
                    "chord {c} must satisfy 0 < |c| < {n}"
                )));
            }
            let r = c.rem_euclid(n as i64) as usize;
            if r == 1 || r == n - 1 {
                return Err(GraphError::LcfInvalid(format!(
                    "chord {c} duplicates a cycle edge"
                )));
            }
        }
        for i in 0..n {
            let j = self.target(i);
            if self.target(j) != i {
                return Err(GraphError::LcfInvalid(format!(
                    "chords are not involutive: {i} -> {j} -> {}",
                    self.target(j)
                )));
            }
        }
        Ok(())
    }
}

/// Parses `(c1, c2, ...)^k` or `[c1, c2, ...]^k`.
pub fn parse_lcf(text: &str) -> Result<LcfSpec, GraphError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    p.ws();
    let close = match p.peek() {
        Some(b'(') => b')',
        Some(b'[') => b']',
        _ => return Err(p.err("expected `(` or `[`")),
    };
    p.pos += 1;
    let mut chords = vec![p.int()?];
    loop {
        p.ws();
        match p.peek() {
            Some(b',') => {
                p.pos += 1;
                chords.push(p.int()?);
            }
            Some(c) if c == close => {
                p.pos += 1;
                break;
            }
            _ => return Err(p.err(&format!("expected `,` or `{}`", close as char))),
        }
    }
    p.ws();
    if p.peek() != Some(b'^') {
        return Err(p.err("expected `^`"));
    }
    p.pos += 1;
    let start = p.pos;
    let repeat = p.int()?;
    if repeat <= 0 {
        return Err(GraphError::LcfSyntax { pos: start, msg: "repeat must be positive".into() });
    }
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    LcfSpec::new(chords, repeat as usize)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> GraphError {
        GraphError::LcfSyntax { pos: self.pos, msg: msg.to_string() }
    }

    fn int(&mut self) -> Result<i64, GraphError> {
        self.ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        // Accept the Unicode minus sign as well.
        if self.s[self.pos..].starts_with("\u{2212}".as_bytes()) {
            self.pos += 3;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits == self.pos {
            self.pos = start;
            return Err(self.err("expected integer"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .replace('\u{2212}', "-");
        text.parse::<i64>().map_err(|e| GraphError::LcfSyntax {
            pos: start,
            msg: e.to_string(),
        })
    }
}

/// Hamiltonian cycle `0..n` plus one chord per vertex. Labels are `0..n-1`.
pub fn graph_from_lcf(spec: &LcfSpec) -> Graph {
    let n = spec.n();
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend((0..n).map(|i| (i, spec.target(i))));
    Graph::new((0..n).map(|i| i.to_string()), edges).expect("validated LCF spec")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumeration oracle: is `i -> i + c_i` an involution on Z_n?
    fn involutive(chords: &[i64], repeat: usize) -> bool {
        let n = (chords.len() * repeat) as i64;
        let t = |i: i64| (i + chords[(i as usize) % chords.len()]).rem_euclid(n);
        (0..n).all(|i| t(t(i)) == i)
    }

    #[test]
    fn parses_heawood() {
        let s = parse_lcf("(5,-5)^7").unwrap();
        assert_eq!(s.chords, vec![5, -5]);
        assert_eq!(s.repeat, 7);
        assert_eq!(s.n(), 14);
        let s2 = parse_lcf("  ( 5 , \u{2212}5 ) ^ 7 ").unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn bracket_form() {
        let s = parse_lcf("[2]^4").unwrap();
        assert_eq!(s.n(), 4);
        let g = graph_from_lcf(&s);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_regular(3));
        let s = parse_lcf("[3,-3]^4").unwrap();
        assert_eq!((s.chords.clone(), s.repeat, s.n()), (vec![3, -3], 4, 8));
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_lcf("(5,-5^7") {
            Err(GraphError::LcfSyntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_lcf("5,-5)^7"), Err(GraphError::LcfSyntax { pos: 0, .. })));
        assert!(matches!(parse_lcf("(5,-5)^0"), Err(GraphError::LcfSyntax { .. })));
        assert!(matches!(parse_lcf("(5,-5)^7x"), Err(GraphError::LcfSyntax { .. })));
        assert!(matches!(parse_lcf("(5,)^7"), Err(GraphError::LcfSyntax { .. })));
    }

    #[test]
    fn invariant_violations() {
        assert!(matches!(parse_lcf("(0)^6"), Err(GraphError::LcfInvalid(_))));
        assert!(matches!(parse_lcf("(14,-5)^7"), Err(GraphError::LcfInvalid(_))));
        assert!(matches!(parse_lcf("(1)^6"), Err(GraphError::LcfInvalid(_))));
        assert!(!involutive(&[5, 5], 7));
        assert!(matches!(parse_lcf("(5,5)^7"), Err(GraphError::LcfInvalid(_))));
        assert!(!involutive(&[2, 3], 2));
        assert!(matches!(parse_lcf("[2,3]^2"), Err(GraphError::LcfInvalid(_))));
    }

    #[test]
    fn five_minus_five_on_twelve_is_involutive() {
        // Odd positions carry -5, which maps back to the even position.
        assert!(involutive(&[5, -5], 6));
        let g = graph_from_lcf(&parse_lcf("(5,-5)^6").unwrap());
        assert_eq!(g.n(), 12);
        assert!(g.is_regular(3));
    }

    #[test]
    fn parse_agrees_with_enumeration_oracle() {
        for chords in [vec![2], vec![3, -3], vec![5, -5], vec![4, 4], vec![6, 2, -2], vec![3]] {
            for repeat in 1..=8 {
                let n = chords.len() * repeat;
                let in_range = n >= 3
                    && chords.iter().all(|&c: &i64| {
                        let r = c.rem_euclid(n as i64) as usize;
                        c != 0 && (c.unsigned_abs() as usize) < n && r != 1 && r != n - 1
                    });
                let ok = LcfSpec::new(chords.clone(), repeat).is_ok();
                assert_eq!(ok, in_range && involutive(&chords, repeat), "{chords:?}^{repeat}");
            }
        }
    }
}
