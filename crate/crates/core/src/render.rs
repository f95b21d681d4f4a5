//! ASCII rendering of Young diagrams and m-modular diagrams.

use crate::composition::{m_modular, Composition};
use crate::error::Result;

/// Rendering style: plain cells, or base-`m` digit rows.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DiagramStyle {
    Young,
    Modular(u64),
}

/// A rendered diagram: stable, trailing-space-free text rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RenderedDiagram {
    pub style: DiagramStyle,
    pub lines: Vec<String>,
}

impl RenderedDiagram {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

/// Left-aligned rows of `#` cells, row `i` holding the `i`th part. Works for
/// partitions (largest part on top) and compositions alike.
pub fn render_young(parts: &[u64]) -> RenderedDiagram {
    RenderedDiagram {
        style: DiagramStyle::Young,
        lines: parts
            .iter()
            .map(|&p| "#".repeat(p as usize))
            .collect(),
    }
}

/// Space-separated digit rows of the `m`-modular diagram.
pub fn render_modular(c: &Composition, m: u64) -> Result<RenderedDiagram> {
    let diagram = m_modular(c, m)?;
    let lines = diagram
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    Ok(RenderedDiagram {
        style: DiagramStyle::Modular(m),
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn young_rows() {
        let d = render_young(&[5, 3, 1, 1]);
        assert_eq!(d.lines, vec!["#####", "###", "#", "#"]);
        assert_eq!(render_young(&[1]).lines, vec!["#"]);
    }

    #[test]
    fn modular_figure() {
        let c = Composition::new(vec![5, 3, 4, 2, 7]).unwrap();
        let d = render_modular(&c, 3).unwrap();
        assert_eq!(d.lines, vec!["3 2", "3", "3 1", "2", "3 3 1"]);
    }

    #[test]
    fn no_trailing_whitespace() {
        let c = Composition::new(vec![5, 3, 4, 2, 7]).unwrap();
        for line in render_modular(&c, 3).unwrap().lines {
            assert_eq!(line.trim_end(), line);
        }
    }
}
