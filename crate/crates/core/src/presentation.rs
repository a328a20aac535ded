//! FI-matrices: presentations of FI-modules by free modules.
//!
//! Text format:
//!
//! ```text
//! # comment
//! generators: 2
//! relations: 3
//! entry 1 1: +1*[1,2] +1*[2,3] +1*[3,1]
//! ```
//!
//! Entry `i j` lists the injections `[a_i] → [b_j]` with their coefficients.
//! Omitted entries are zero.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::combinatorics::{compose, enumerate_injections, falling_factorial, Injection};
use crate::formal::FormalSum;
use crate::linalg::IntMatrix;
use crate::xi::xi_basis;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("entry ({row}, {col}): injection {injection} does not map [{expected_domain}] to [{expected_codomain}]")]
    DegreeMismatch { row: usize, col: usize, injection: String, expected_domain: usize, expected_codomain: usize },
    #[error("entry array is {found_rows}×{found_cols}, expected {rows}×{cols}")]
    Shape { rows: usize, cols: usize, found_rows: usize, found_cols: usize },
}

pub type Result<T, E = PresentationError> = std::result::Result<T, E>;

/// A map of free FI-modules `⨁_j ℤFI(b_j, −) → ⨁_i ℤFI(a_i, −)`, whose
/// cokernel is the presented module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FIPresentation {
    generators: Vec<usize>,
    relations: Vec<usize>,
    entries: Vec<Vec<FormalSum<Injection>>>,
}

impl FIPresentation {
    /// `entries[i][j]` is a combination of injections `[a_i] → [b_j]`.
    pub fn new(generators: Vec<usize>, relations: Vec<usize>, entries: Vec<Vec<FormalSum<Injection>>>) -> Result<Self> {
        let (g, r) = (generators.len(), relations.len());
        if entries.len() != g || entries.iter().any(|row| row.len() != r) {
            return Err(PresentationError::Shape {
                rows: g,
                cols: r,
                found_rows: entries.len(),
                found_cols: entries.first().map_or(0, |row| row.len()),
            });
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                for f in entry.keys() {
                    if f.domain_size() != generators[i] || f.codomain_size() != relations[j] {
                        return Err(PresentationError::DegreeMismatch {
                            row: i + 1,
                            col: j + 1,
                            injection: f.to_string(),
                            expected_domain: generators[i],
                            expected_codomain: relations[j],
                        });
                    }
                }
            }
        }
        Ok(Self { generators, relations, entries })
    }

    /// The free module on generators of the given degrees.
    pub fn free(generators: Vec<usize>) -> Self {
        let entries = vec![Vec::new(); generators.len()];
        Self { generators, relations: Vec::new(), entries }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::default().run(text)
    }

    pub fn generator_degrees(&self) -> &[usize] {
        &self.generators
    }

    pub fn relation_degrees(&self) -> &[usize] {
        &self.relations
    }

    pub fn entry(&self, i: usize, j: usize) -> &FormalSum<Injection> {
        &self.entries[i][j]
    }

    /// Largest generator or relation degree; 0 for the empty presentation.
    pub fn degree(&self) -> usize {
        self.generators.iter().chain(&self.relations).copied().max().unwrap_or(0)
    }

    /// The presentation with generators and relations reordered.
    pub fn permuted(&self, gen_order: &[usize], rel_order: &[usize]) -> Self {
        Self {
            generators: gen_order.iter().map(|&i| self.generators[i]).collect(),
            relations: rel_order.iter().map(|&j| self.relations[j]).collect(),
            entries: gen_order
                .iter()
                .map(|&i| rel_order.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Ξ(ℓ)_Z: rows are `xi_basis(ℓ, a_i)` stacked over `i`, columns are
    /// `xi_basis(ℓ, b_j)` stacked over `j`.
    pub fn evaluate_xi(&self, ell: usize) -> IntMatrix {
        let row_sizes: Vec<usize> = self.generators.iter().map(|&a| xi_basis(ell, a).len()).collect();
        let col_bases: Vec<_> = self.relations.iter().map(|&b| xi_basis(ell, b)).collect();
        let row_offsets = &offsets(&row_sizes);
        let columns: Vec<Vec<BigInt>> = col_bases
            .par_iter()
            .enumerate()
            .flat_map_iter(|(j, basis)| {
                basis.iter().map(move |w| {
                    let mut col = vec![BigInt::default(); *row_offsets.last().unwrap()];
                    for (i, row) in self.entries.iter().enumerate() {
                        for (f, c) in &row[j] {
                            if let Some(img) = w.act(f).expect("degrees checked") {
                                col[row_offsets[i] + img.basis_index()] += c;
                            }
                        }
                    }
                    col
                })
            })
            .collect();
        IntMatrix::from_columns(&columns, *row_offsets.last().unwrap())
    }

    /// Row and column labels of [`evaluate_xi`](Self::evaluate_xi); block
    /// indices are prefixed when there is more than one generator or relation.
    pub fn xi_labels(&self, ell: usize) -> (Vec<String>, Vec<String>) {
        let label = |degrees: &[usize]| -> Vec<String> {
            let tagged = degrees.len() > 1;
            degrees
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| {
                    xi_basis(ell, a)
                        .into_iter()
                        .map(move |w| if tagged { format!("{}:{w}", i + 1) } else { w.to_string() })
                })
                .collect()
        };
        (label(&self.generators), label(&self.relations))
    }

    /// Size of the degree-`n` presentation matrix.
    pub fn matrix_shape_at(&self, n: usize) -> (BigUint, BigUint) {
        let count = |ds: &[usize]| ds.iter().map(|&a| falling_factorial(n, a)).sum::<BigUint>();
        (count(&self.generators), count(&self.relations))
    }

    /// The degree-`n` matrix: rows `⊔_i FI(a_i, n)`, columns `⊔_j FI(b_j, n)`;
    /// column `g` of block `j` holds `c` at row `g ∘ f` for every term `c·f` of
    /// entry `(i, j)`. Its cokernel is `M_n`.
    pub fn presentation_matrix_at(&self, n: usize) -> IntMatrix {
        let row_sizes: Vec<usize> =
            self.generators.iter().map(|&a| if a <= n { (n - a + 1..=n).product() } else { 0 }).collect();
        let row_offsets = &offsets(&row_sizes);
        let columns: Vec<Vec<BigInt>> = self
            .relations
            .par_iter()
            .enumerate()
            .flat_map_iter(|(j, &b)| {
                enumerate_injections(b, n).into_iter().map(move |g| {
                    let mut col = vec![BigInt::default(); *row_offsets.last().unwrap()];
                    for (i, row) in self.entries.iter().enumerate() {
                        for (f, c) in &row[j] {
                            let gf = compose(f, &g).expect("degrees checked");
                            col[row_offsets[i] + gf.lex_index()] += c;
                        }
                    }
                    col
                })
            })
            .collect();
        IntMatrix::from_columns(&columns, *row_offsets.last().unwrap())
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    out.push(0);
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

impl fmt::Display for FIPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ds: &[usize]| ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "generators: {}", join(&self.generators))?;
        writeln!(f, "relations: {}", join(&self.relations))?;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                write!(f, "entry {} {}:", i + 1, j + 1)?;
                for (inj, c) in entry {
                    let sign = if c.sign() == num_bigint::Sign::Minus { "" } else { "+" };
                    write!(f, " {sign}{c}*{inj}")?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct Parser {
    generators: Option<Vec<usize>>,
    relations: Option<Vec<usize>>,
    entries: Vec<((usize, usize), FormalSum<Injection>)>,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> PresentationError {
    PresentationError::Parse { line, column, message: message.into() }
}

impl Parser {
    fn run(mut self, text: &str) -> Result<FIPresentation> {
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some(colon) = content.find(':') else {
                return Err(parse_error(line_no, 1, "expected `generators:`, `relations:` or `entry i j:`"));
            };
            let head = content[..colon].trim();
            let body_col = colon + 2;
            let body = &content[colon + 1..];
            match head {
                "generators" => {
                    if self.generators.is_some() {
                        return Err(parse_error(line_no, 1, "duplicate `generators:` line"));
                    }
                    self.generators = Some(parse_degrees(body, line_no, body_col)?);
                }
                "relations" => {
                    if self.relations.is_some() {
                        return Err(parse_error(line_no, 1, "duplicate `relations:` line"));
                    }
                    self.relations = Some(parse_degrees(body, line_no, body_col)?);
                }
                _ if head.starts_with("entry") => self.entry(head, body, line_no, body_col)?,
                _ => return Err(parse_error(line_no, 1, format!("unknown directive {head:?}"))),
            }
        }
        let generators = self.generators.ok_or_else(|| parse_error(1, 1, "missing `generators:` line"))?;
        let relations = self.relations.ok_or_else(|| parse_error(1, 1, "missing `relations:` line"))?;
        let mut entries = vec![vec![FormalSum::new(); relations.len()]; generators.len()];
        for ((i, j), e) in self.entries {
            entries[i][j] = e;
        }
        FIPresentation::new(generators, relations, entries)
    }

    fn entry(&mut self, head: &str, body: &str, line: usize, body_col: usize) -> Result<()> {
        let (Some(generators), Some(relations)) = (&self.generators, &self.relations) else {
            return Err(parse_error(line, 1, "`entry` before `generators:` and `relations:`"));
        };
        let idx: Vec<&str> = head["entry".len()..].split_whitespace().collect();
        let parse_idx = |s: &str, bound: usize, what: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if (1..=bound).contains(&v) => Ok(v - 1),
                _ => Err(parse_error(line, 1, format!("{what} index {s:?} is not in 1..={bound}"))),
            }
        };
        if idx.len() != 2 {
            return Err(parse_error(line, 1, "expected `entry i j:`"));
        }
        let i = parse_idx(idx[0], generators.len(), "generator")?;
        let j = parse_idx(idx[1], relations.len(), "relation")?;
        if self.entries.iter().any(|(key, _)| *key == (i, j)) {
            return Err(parse_error(line, 1, format!("duplicate entry {} {}", i + 1, j + 1)));
        }
        let (a, b) = (generators[i], relations[j]);
        let mut sum = FormalSum::new();
        for (col, coeff, inj) in scan_terms(body, line, body_col)? {
            let f = Injection::parse(&inj, b).map_err(|e| parse_error(line, col, e.to_string()))?;
            if f.domain_size() != a {
                return Err(parse_error(
                    line,
                    col,
                    format!("injection {inj} has {} images, generator {} has degree {a}", f.domain_size(), i + 1),
                ));
            }
            sum.add_term(f, coeff);
        }
        self.entries.push(((i, j), sum));
        Ok(())
    }
}

fn parse_degrees(body: &str, line: usize, body_col: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for tok in body.split_whitespace() {
        let pos = body[offset..].find(tok).unwrap() + offset;
        offset = pos + tok.len();
        out.push(tok.parse().map_err(|_| parse_error(line, body_col + pos, format!("bad degree {tok:?}")))?);
    }
    Ok(out)
}

/// Splits `+1*[1,2] -3*[2,1]` into `(column, coefficient, injection text)`.
fn scan_terms(body: &str, line: usize, body_col: usize) -> Result<Vec<(usize, BigInt, String)>> {
    let chars: Vec<(usize, char)> = body.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    let col_of = |k: usize| body_col + chars.get(k).map_or(body.len(), |c| c.0);
    let skip_ws = |k: &mut usize| {
        while *k < chars.len() && chars[*k].1.is_whitespace() {
            *k += 1;
        }
    };
    loop {
        skip_ws(&mut k);
        if k == chars.len() {
            break;
        }
        let start = k;
        let mut number = String::new();
        if matches!(chars[k].1, '+' | '-') {
            number.push(chars[k].1);
            k += 1;
            skip_ws(&mut k);
        }
        let digits_start = k;
        while k < chars.len() && chars[k].1.is_ascii_digit() {
            number.push(chars[k].1);
            k += 1;
        }
        let coeff = if k == digits_start {
            if chars.get(k).map(|c| c.1) != Some('[') {
                return Err(parse_error(line, col_of(k), "expected a coefficient or `[`"));
            }
            if number == "-" {
                -BigInt::one()
            } else {
                BigInt::one()
            }
        } else {
            skip_ws(&mut k);
            if chars.get(k).map(|c| c.1) != Some('*') {
                return Err(parse_error(line, col_of(k), "expected `*` after coefficient"));
            }
            k += 1;
            skip_ws(&mut k);
            number.parse::<BigInt>().expect("sign and digits")
        };
        if chars.get(k).map(|c| c.1) != Some('[') {
            return Err(parse_error(line, col_of(k), "expected `[`"));
        }
        let open = k;
        while k < chars.len() && chars[k].1 != ']' {
            k += 1;
        }
        if k == chars.len() {
            return Err(parse_error(line, col_of(open), "unclosed `[`"));
        }
        k += 1;
        let inj: String = chars[open..k].iter().map(|c| c.1).filter(|c| !c.is_whitespace()).collect();
        out.push((col_of(start), coeff, inj));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cokernel, AbelianGroup};

    pub(crate) const FIRST: &str = "generators: 2\nrelations: 3\nentry 1 1: +1*[1,2] +1*[2,3] +1*[3,1]\n";

    #[test]
    fn parse_and_print() {
        let p = FIPresentation::parse(FIRST).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.entry(0, 0).len(), 3);
        assert_eq!(p.to_string(), FIRST);
        assert_eq!(FIPresentation::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn parse_variants() {
        let p = FIPresentation::parse("# free\ngenerators: 1 2\nrelations:\n").unwrap();
        assert_eq!(p, FIPresentation::free(vec![1, 2]));
        let p = FIPresentation::parse("generators: 1\nrelations: 1\nentry 1 1: 2*[1] -2 * [ 1 ]\n").unwrap();
        assert!(p.entry(0, 0).is_zero());
        assert_eq!(p.to_string(), "generators: 1\nrelations: 1\n");
        let p = FIPresentation::parse("generators: 1\nrelations: 2\nentry 1 1: [2] -[1] # trailing\n").unwrap();
        assert_eq!(p.to_string(), "generators: 1\nrelations: 2\nentry 1 1: -1*[1] +1*[2]\n");
    }

    #[test]
    fn parse_errors_are_positioned() {
        let err = |text: &str| match FIPresentation::parse(text) {
            Err(PresentationError::Parse { line, column, .. }) => (line, column),
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(err("generators: 2\nrelations: 3\nentry 1 1: +1*[1,2] +1*[2,2]\n"), (3, 21));
        assert_eq!(err("generators: 2\nrelations: 3\nentry 1 1: +1*[1]\n"), (3, 12));
        assert_eq!(err("generators: 2\nrelations: 3\nentry 1 1: +1*[1,2]\nentry 1 1: +1*[1,3]\n"), (4, 1));
        assert_eq!(err("generators: 2\nrelations: 3\nentry 2 1: +1*[1,2]\n"), (3, 1));
        assert_eq!(err("generators: 2 x\nrelations: 3\n"), (1, 15));
        assert_eq!(err("generators: 2\nrelations: 3\nentry 1 1: +1*[1,2\n"), (3, 15));
        assert_eq!(err("generators: 2\nrelations: 3\nentry 1 1: 3[1,2]\n"), (3, 13));
        assert_eq!(err("relations: 3\nentry 1 1: +1*[1,2]\n"), (2, 1));
    }

    #[test]
    fn xi_matrices_of_first_example() {
        let p = FIPresentation::parse(FIRST).unwrap();
        let m0 = p.evaluate_xi(0);
        assert_eq!(m0, IntMatrix::from_i64_rows(&[vec![2, 1, 1, 2, 2, 1], vec![1, 2, 2, 1, 1, 2]]));
        let (rows, cols) = p.xi_labels(0);
        assert_eq!(rows, ["x1x2", "x2x1"]);
        assert_eq!(cols, ["x1x2x3", "x1x3x2", "x2x1x3", "x2x3x1", "x3x1x2", "x3x2x1"]);
        assert_eq!(p.evaluate_xi(1), IntMatrix::from_i64_rows(&[vec![1; 6], vec![1; 6]]));
        assert_eq!(p.evaluate_xi(2), IntMatrix::from_i64_rows(&[vec![1, 0, 0, 1, 1, 0], vec![0, 1, 1, 0, 0, 1]]));
        assert_eq!(p.evaluate_xi(3).rows(), 0);
        assert_eq!(cokernel(&m0), AbelianGroup::cyclic(3));
    }

    #[test]
    fn degree_matrices() {
        let p = FIPresentation::parse(FIRST).unwrap();
        let m = p.presentation_matrix_at(5);
        assert_eq!((m.rows(), m.cols()), (20, 60));
        assert_eq!(cokernel(&m), AbelianGroup::from_cyclic_orders(4, [BigInt::from(3)]));
        let free = FIPresentation::free(vec![2]);
        assert_eq!(cokernel(&free.presentation_matrix_at(4)), AbelianGroup::free(12));
        assert!(cokernel(&p.presentation_matrix_at(1)).is_zero());
        assert_eq!(p.matrix_shape_at(6), (BigUint::from(30u32), BigUint::from(120u32)));
    }

    #[test]
    fn splitting_entries_is_linear() {
        let p = FIPresentation::parse(FIRST).unwrap();
        let total = p.evaluate_xi(0);
        let mut acc = IntMatrix::zeros(total.rows(), total.cols());
        for (f, c) in p.entry(0, 0) {
            let single =
                FIPresentation::new(vec![2], vec![3], vec![vec![[(f.clone(), c.clone())].into_iter().collect()]])
                    .unwrap()
                    .evaluate_xi(0);
            for i in 0..acc.rows() {
                for j in 0..acc.cols() {
                    acc.add_to(i, j, single.get(i, j));
                }
            }
        }
        assert_eq!(acc, total);
    }
}
