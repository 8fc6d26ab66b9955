//! Explicit cycle lists, one closed walk per line: `A G A` or `A->G->A`.

use crate::analysis::Cycle;
use crate::model::Cdg;

use super::ParseError;

/// Reads cycles in file order. Hops with no edge in `cdg` are kept as
/// phantom hops on the cycle.
pub fn parse_cycles(text: &str, cdg: &Cdg) -> Result<Vec<Cycle>, ParseError> {
    let mut cycles = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let spaced = body.replace("->", " ");
        let mut walk: Vec<usize> = spaced
            .split_whitespace()
            .map(|id| {
                cdg.node_ix(id)
                    .ok_or_else(|| ParseError::line(line, format!("unknown class `{id}`")))
            })
            .collect::<Result<_, _>>()?;
        if walk.len() > 1 && walk.first() == walk.last() {
            walk.pop();
        }
        let cycle = Cycle::from_walk(cdg, walk).map_err(|e| ParseError::line(line, e.to_string()))?;
        cycles.push(cycle);
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_matrix;

    #[test]
    fn reads_both_spellings() {
        let cdg = parse_matrix(",a,b,c\na,,As,\nb,As,,As\nc,As,,\n").unwrap();
        let cycles = parse_cycles("# two\na b a\na->b->c->a\n\n", &cdg).unwrap();
        assert_eq!(cycles.len(), 2);
        assert_eq!(cycles[0].nodes, vec![0, 1]);
        assert_eq!(cycles[1].edges.len(), 3);
        assert!(cycles[1].phantom_hops.is_empty());
    }

    #[test]
    fn phantom_and_bad_lines() {
        let cdg = parse_matrix(",a,b,c\na,,As,\nb,,,As\nc,,,\n").unwrap();
        let cycles = parse_cycles("a b c a\n", &cdg).unwrap();
        assert_eq!(cycles[0].phantom_hops, vec![(2, 0)]);
        assert!(matches!(parse_cycles("a z a\n", &cdg), Err(ParseError::Line { line: 1, .. })));
        assert!(matches!(parse_cycles("\na b a b a\n", &cdg), Err(ParseError::Line { line: 2, .. })));
    }
}
