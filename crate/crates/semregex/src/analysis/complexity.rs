//! Complexity profiling of semantic regexes and per-layer aggregation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lang::{PrimitiveKind, RegexNode, StructureKind};

use super::AnalysisError;

/// Coarse shape of a regex, for the layer-trend analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureClass {
    SinglePrimitive,
    Sequence,
    Alternation,
    Optional,
    Contextual,
    Mixed,
}

impl StructureClass {
    pub fn id(self) -> &'static str {
        match self {
            StructureClass::SinglePrimitive => "single-primitive",
            StructureClass::Sequence => "sequence",
            StructureClass::Alternation => "alternation",
            StructureClass::Optional => "optional",
            StructureClass::Contextual => "contextual",
            StructureClass::Mixed => "mixed",
        }
    }
}

/// Component counts and structure class of one regex. Components are the
/// meaning-bearing nodes — primitives and context gates; sequence,
/// alternation, and optional are structure and are not counted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub n_components: usize,
    pub n_symbol: usize,
    pub n_lexeme: usize,
    pub n_field: usize,
    pub n_context: usize,
    pub structure_class: StructureClass,
    pub depth: usize,
}

pub fn complexity_profile(regex: &RegexNode) -> ComplexityProfile {
    let (mut n_symbol, mut n_lexeme, mut n_field, mut n_context) = (0, 0, 0, 0);
    let mut structures: Vec<StructureKind> = Vec::new();
    regex.visit(&mut |node| match node {
        RegexNode::Symbol(_) => n_symbol += 1,
        RegexNode::Lexeme(_) => n_lexeme += 1,
        RegexNode::Field(_) => n_field += 1,
        RegexNode::Context { .. } => n_context += 1,
        RegexNode::Sequence(_) => structures.push(StructureKind::Sequence),
        RegexNode::Alternation(_) => structures.push(StructureKind::Alternation),
        RegexNode::Optional(_) => structures.push(StructureKind::Optional),
    });
    structures.sort();
    structures.dedup();
    let structure_class = match regex {
        _ if regex.primitive_kind().is_some() => StructureClass::SinglePrimitive,
        RegexNode::Context { .. } => StructureClass::Contextual,
        _ => match structures.as_slice() {
            [StructureKind::Sequence] => StructureClass::Sequence,
            [StructureKind::Alternation] => StructureClass::Alternation,
            [StructureKind::Optional] => StructureClass::Optional,
            _ => StructureClass::Mixed,
        },
    };
    ComplexityProfile {
        n_components: n_symbol + n_lexeme + n_field + n_context,
        n_symbol,
        n_lexeme,
        n_field,
        n_context,
        structure_class,
        depth: regex.depth(),
    }
}

/// One row of the per-layer complexity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRow {
    pub layer: u32,
    pub mean_components: f64,
    pub prop_single_primitive: f64,
    pub prop_sequence: f64,
    pub prop_alternation: f64,
    pub prop_optional: f64,
    pub prop_contextual: f64,
    /// Share of all components in the layer that are of each primitive
    /// kind (plus contexts); these four sum to 1.
    pub prop_symbol: f64,
    pub prop_lexeme: f64,
    pub prop_field: f64,
    pub prop_context: f64,
}

/// Aggregate profiles per layer, ordered by layer.
pub fn layer_summary(
    profiles: &BTreeMap<u32, Vec<ComplexityProfile>>,
) -> Result<Vec<LayerRow>, AnalysisError> {
    let mut rows = Vec::with_capacity(profiles.len());
    for (&layer, layer_profiles) in profiles {
        if layer_profiles.is_empty() {
            return Err(AnalysisError::Empty(format!("layer {layer} has no profiles")));
        }
        let n = layer_profiles.len() as f64;
        let class_prop = |class: StructureClass| {
            layer_profiles.iter().filter(|p| p.structure_class == class).count() as f64 / n
        };
        let components: usize = layer_profiles.iter().map(|p| p.n_components).sum();
        let kind_prop = |count: fn(&ComplexityProfile) -> usize| {
            layer_profiles.iter().map(count).sum::<usize>() as f64 / components as f64
        };
        rows.push(LayerRow {
            layer,
            mean_components: components as f64 / n,
            prop_single_primitive: class_prop(StructureClass::SinglePrimitive),
            prop_sequence: class_prop(StructureClass::Sequence),
            prop_alternation: class_prop(StructureClass::Alternation),
            prop_optional: class_prop(StructureClass::Optional),
            prop_contextual: class_prop(StructureClass::Contextual),
            prop_symbol: kind_prop(|p| p.n_symbol),
            prop_lexeme: kind_prop(|p| p.n_lexeme),
            prop_field: kind_prop(|p| p.n_field),
            prop_context: kind_prop(|p| p.n_context),
        });
    }
    Ok(rows)
}

/// Render layer rows as CSV with a fixed column order.
pub fn layer_summary_csv(rows: &[LayerRow]) -> String {
    let mut out = String::from(
        "layer,mean_components,prop_single_primitive,prop_sequence,prop_alternation,prop_optional,prop_contextual,prop_symbol,prop_lexeme,prop_field,prop_context\n",
    );
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.layer,
            row.mean_components,
            row.prop_single_primitive,
            row.prop_sequence,
            row.prop_alternation,
            row.prop_optional,
            row.prop_contextual,
            row.prop_symbol,
            row.prop_lexeme,
            row.prop_field,
            row.prop_context,
        ));
    }
    out
}

/// Count occurrences of each primitive kind, for spot checks.
pub fn primitive_counts(regex: &RegexNode) -> BTreeMap<PrimitiveKind, usize> {
    let mut counts = BTreeMap::new();
    regex.visit(&mut |node| {
        if let Some(kind) = node.primitive_kind() {
            *counts.entry(kind).or_insert(0) += 1;
        }
    });
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    fn profile(s: &str) -> ComplexityProfile {
        complexity_profile(&parse(s).unwrap())
    }

    #[test]
    fn single_primitive() {
        let p = profile("[:symbol 54:]");
        assert_eq!(p.n_components, 1);
        assert_eq!(p.structure_class, StructureClass::SinglePrimitive);
        assert_eq!(p.depth, 1);
    }

    #[test]
    fn context_counts_as_component() {
        let p = profile("@{:context journalism:}([:lexeme cover:])");
        assert_eq!(p.n_components, 2);
        assert_eq!(p.n_context, 1);
        assert_eq!(p.n_lexeme, 1);
        assert_eq!(p.structure_class, StructureClass::Contextual);
    }

    #[test]
    fn sequence_of_fields() {
        let p = profile("[:field political title:] [:field last name:]");
        assert_eq!(p.n_components, 2);
        assert_eq!(p.n_field, 2);
        assert_eq!(p.structure_class, StructureClass::Sequence);
    }

    #[test]
    fn combined_structures_are_mixed() {
        let p = profile("[:field color:] ([:symbol and:]|[:symbol or:]) [:field color:]");
        assert_eq!(p.structure_class, StructureClass::Mixed);
        assert_eq!(p.n_components, 4);
    }

    #[test]
    fn layer_summary_means_and_proportions() {
        let layer0: Vec<_> =
            ["[:symbol a:]", "[:lexeme b:]", "[:field c:]", "[:symbol d:]"]
                .iter()
                .map(|s| profile(s))
                .collect();
        let layer1: Vec<_> = ["[:symbol a:] [:symbol b:]", "[:lexeme c:] [:field d:]"]
            .iter()
            .map(|s| profile(s))
            .collect();
        let mut by_layer = BTreeMap::new();
        by_layer.insert(0, layer0);
        by_layer.insert(1, layer1);
        let rows = layer_summary(&by_layer).unwrap();
        assert_eq!(rows[0].mean_components, 1.0);
        assert_eq!(rows[0].prop_single_primitive, 1.0);
        assert_eq!(rows[0].prop_sequence, 0.0);
        assert_eq!(rows[1].mean_components, 2.0);
        assert_eq!(rows[1].prop_single_primitive, 0.0);
        assert_eq!(rows[1].prop_sequence, 1.0);
    }

    #[test]
    fn mixed_component_counts_example() {
        // {1,1,2,2} components → mean 1.5
        let profiles: Vec<_> = [
            "[:symbol a:]",
            "[:symbol b:]",
            "[:symbol a:] [:symbol b:]",
            "[:symbol c:] [:symbol d:]",
        ]
        .iter()
        .map(|s| profile(s))
        .collect();
        let mut by_layer = BTreeMap::new();
        by_layer.insert(3, profiles);
        let rows = layer_summary(&by_layer).unwrap();
        assert_eq!(rows[0].mean_components, 1.5);
    }

    #[test]
    fn empty_layer_is_rejected() {
        let mut by_layer: BTreeMap<u32, Vec<ComplexityProfile>> = BTreeMap::new();
        by_layer.insert(0, Vec::new());
        assert!(layer_summary(&by_layer).is_err());
    }

    #[test]
    fn csv_has_fixed_header() {
        let csv = layer_summary_csv(&[]);
        assert!(csv.starts_with("layer,mean_components,prop_single_primitive,"));
    }

    #[test]
    fn profile_is_stable_under_round_trip() {
        let s = "@{:context political:}([:lexeme run:] [:symbol for:]?)";
        let node = parse(s).unwrap();
        let reparsed = parse(&crate::lang::render(&node)).unwrap();
        assert_eq!(complexity_profile(&node), complexity_profile(&reparsed));
    }
}
