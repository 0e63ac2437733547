use std::fmt;

use super::FpError;

/// A word in the generators: `(generator index, exponent)` letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    /// Build a word as given; call [`Word::free_reduce`] to normalize.
    pub fn new(letters: Vec<(usize, i64)>) -> Self {
        Word { letters }
    }

    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(index: usize) -> Self {
        Word { letters: vec![(index, 1)] }
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(self.letters.len());
        for &(g, e) in &self.letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { letters: out }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }.free_reduce()
    }

    /// Exponent sum of each of the `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut sums = vec![0; n];
        for &(g, e) in &self.letters {
            sums[g] += e;
        }
        sums
    }

    pub fn max_index(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    /// Parse whitespace-separated `name`, `name^-1`, `name^k` tokens; `1` is the empty word.
    pub fn parse(text: &str, names: &[String]) -> Result<Word, FpError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, k)) => {
                    let k: i64 = k.parse().map_err(|_| FpError::BadToken(tok.to_string()))?;
                    if k == 0 {
                        return Err(FpError::BadToken(tok.to_string()));
                    }
                    (n, k)
                }
                None => (tok, 1),
            };
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| FpError::UnknownGenerator(name.to_string()))?;
            letters.push((idx, exp));
        }
        Ok(Word { letters })
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        NamedWord { word: self, names }
    }
}

struct NamedWord<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for NamedWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.word.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = self.names.get(g).map(String::as_str).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names() -> Vec<String> {
        ["g", "h"].map(String::from).to_vec()
    }

    #[test]
    fn reductions() {
        let w = Word::parse("g g^-1", &names()).unwrap();
        assert!(w.free_reduce().is_empty());
        let w = Word::parse("g^2 g^-1", &names()).unwrap();
        assert_eq!(w.free_reduce(), Word::generator(0));
        let w = Word::parse("g h^-3 g", &names()).unwrap();
        assert_eq!(w.free_reduce(), w);
        let w = Word::parse("h g g^-1 h^-1 g", &names()).unwrap();
        assert_eq!(w.free_reduce(), Word::generator(0));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Word::parse("g k", &names()), Err(FpError::UnknownGenerator(n)) if n == "k"));
        assert!(matches!(Word::parse("g^x", &names()), Err(FpError::BadToken(_))));
        assert!(matches!(Word::parse("g^0", &names()), Err(FpError::BadToken(_))));
        assert!(Word::parse("1", &names()).unwrap().is_empty());
    }

    #[test]
    fn display_round_trip() {
        let w = Word::parse("g^2 h^-1 g", &names()).unwrap();
        assert_eq!(w.display(&names()).to_string(), "g^2 h^-1 g");
        assert_eq!(Word::identity().display(&names()).to_string(), "1");
    }

    proptest! {
        #[test]
        fn free_reduce_is_idempotent(letters in prop::collection::vec((0usize..3, -3i64..=3), 0..20)) {
            let w = Word::new(letters).free_reduce();
            prop_assert_eq!(w.free_reduce(), w.clone());
            prop_assert!(w.letters().iter().all(|&(_, e)| e != 0));
            prop_assert!(w.letters().windows(2).all(|p| p[0].0 != p[1].0));
            prop_assert!(w.concat(&w.inverse()).is_empty());
        }
    }
}
