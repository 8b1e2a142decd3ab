//! Evaluator prompt assembly. Each metric has a natural-language and a
//! structured-description variant of its prompt; the structured variants
//! carry a `{SEMANTIC_REGEX_DESCRIPTION}` slot that is spliced with the
//! language definition. The `{{` / `}}` escapes in the fixtures (they are
//! transcribed format strings) are unescaped during assembly.

use crate::describe::{parse_listing, LANGUAGE_DEFINITION};
use crate::llm::ChatMessage;

const DETECTION_NL: &str = include_str!("../../fixtures/prompts/detection_nl.txt");
const DETECTION_SR: &str = include_str!("../../fixtures/prompts/detection_sr.txt");
const FUZZING_NL: &str = include_str!("../../fixtures/prompts/fuzzing_nl.txt");
const FUZZING_SR: &str = include_str!("../../fixtures/prompts/fuzzing_sr.txt");
const RATING_NL: &str = include_str!("../../fixtures/prompts/rating_nl.txt");
const RATING_SR: &str = include_str!("../../fixtures/prompts/rating_sr.txt");
const GENERATION_NL: &str = include_str!("../../fixtures/prompts/generation_nl.txt");
const GENERATION_SR: &str = include_str!("../../fixtures/prompts/generation_sr.txt");

/// Which description style the evaluator is judging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescriptionStyle {
    NaturalLanguage,
    SemanticRegex,
}

impl DescriptionStyle {
    /// The label introducing the description in detection/fuzzing turns.
    fn explanation_label(self) -> &'static str {
        match self {
            DescriptionStyle::NaturalLanguage => "Latent explanation",
            DescriptionStyle::SemanticRegex => "Semantic Regex explanation",
        }
    }
}

fn render_template(template: &str) -> String {
    template
        .replace("{SEMANTIC_REGEX_DESCRIPTION}", LANGUAGE_DEFINITION.trim_end())
        .replace("{{", "{")
        .replace("}}", "}")
}

fn transcript(template: &str) -> Vec<ChatMessage> {
    parse_listing(&render_template(template))
}

/// System message plus few-shot exchanges for the detection evaluator.
pub fn detection_preamble(style: DescriptionStyle) -> Vec<ChatMessage> {
    match style {
        DescriptionStyle::NaturalLanguage => transcript(DETECTION_NL),
        DescriptionStyle::SemanticRegex => transcript(DETECTION_SR),
    }
}

/// System message plus few-shot exchanges for the fuzzing evaluator.
pub fn fuzzing_preamble(style: DescriptionStyle) -> Vec<ChatMessage> {
    match style {
        DescriptionStyle::NaturalLanguage => transcript(FUZZING_NL),
        DescriptionStyle::SemanticRegex => transcript(FUZZING_SR),
    }
}

/// System message for the rating evaluator.
pub fn rating_system(style: DescriptionStyle) -> ChatMessage {
    let template = match style {
        DescriptionStyle::NaturalLanguage => RATING_NL,
        DescriptionStyle::SemanticRegex => RATING_SR,
    };
    transcript(template).remove(0)
}

/// System message for the clarity generation prompt.
pub fn generation_system(style: DescriptionStyle) -> ChatMessage {
    let template = match style {
        DescriptionStyle::NaturalLanguage => GENERATION_NL,
        DescriptionStyle::SemanticRegex => GENERATION_SR,
    };
    transcript(template).remove(0)
}

/// The final user turn for detection/fuzzing: the description, then the
/// batch of test examples numbered from zero.
pub fn judgment_user_turn(
    style: DescriptionStyle,
    description: &str,
    examples: &[String],
) -> ChatMessage {
    let mut content =
        format!("{}: {description}\n\nTest examples:\n", style.explanation_label());
    for (i, example) in examples.iter().enumerate() {
        content.push_str(&format!("Example {i}: {example}\n"));
    }
    ChatMessage::user(content.trim_end_matches('\n').to_string())
}

/// The final user turn for the rating evaluator: the concept, then
/// id-keyed sequences.
pub fn rating_user_turn(description: &str, batch: &[(String, String)]) -> ChatMessage {
    let mut content = format!("Concept: \"{description}\"\n\nSequences:\n");
    for (id, text) in batch {
        content.push_str(&format!("{id}: {text}\n"));
    }
    ChatMessage::user(content.trim_end_matches('\n').to_string())
}

/// The user turn for one clarity generation call. The sample ordinal is
/// included so repeated calls stay distinct under response caching.
pub fn generation_user_turn(description: &str, n_sequences: usize, sample_ordinal: usize) -> ChatMessage {
    ChatMessage::user(format!(
        "Concept: \"{description}\"\n\nGenerate {n_sequences} sequences. (sample {sample_ordinal})"
    ))
}
