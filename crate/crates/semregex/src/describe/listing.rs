//! Parser for the role-tagged dialogue fixtures shipped under
//! `fixtures/prompts/`.
//!
//! The fixtures transcribe their sources verbatim, typos included, so the
//! tag grammar is deliberately forgiving:
//! * `<assitant>` / `</asistant>` are accepted as assistant tags;
//! * an opening tag while a message is still open closes that message
//!   first (one transcript ends a user turn with `<user>` instead of
//!   `</user>`);
//! * text outside any message is ignored, and messages that end up empty
//!   are dropped.

use crate::llm::{ChatMessage, Role};

fn open_tag(line: &str) -> Option<Role> {
    match line.trim_end() {
        "<system>" => Some(Role::System),
        "<user>" => Some(Role::User),
        "<assistant>" | "<assitant>" => Some(Role::Assistant),
        _ => None,
    }
}

fn is_close_tag(line: &str) -> bool {
    matches!(line.trim_end(), "</system>" | "</user>" | "</assistant>" | "</asistant>")
}

/// Parse a role-tagged transcript into chat messages. Message content is
/// the tag-delimited lines joined verbatim, minus leading/trailing blank
/// lines.
pub fn parse_listing(text: &str) -> Vec<ChatMessage> {
    let mut messages = Vec::new();
    let mut current: Option<(Role, Vec<&str>)> = None;
    let flush = |slot: &mut Option<(Role, Vec<&str>)>, messages: &mut Vec<ChatMessage>| {
        if let Some((role, lines)) = slot.take() {
            let mut lines = lines;
            while lines.first().is_some_and(|l| l.trim().is_empty()) {
                lines.remove(0);
            }
            while lines.last().is_some_and(|l| l.trim().is_empty()) {
                lines.pop();
            }
            if !lines.is_empty() {
                messages.push(ChatMessage { role, content: lines.join("\n") });
            }
        }
    };
    for line in text.lines() {
        if let Some(role) = open_tag(line) {
            flush(&mut current, &mut messages);
            current = Some((role, Vec::new()));
        } else if is_close_tag(line) {
            flush(&mut current, &mut messages);
        } else if let Some((_, lines)) = current.as_mut() {
            lines.push(line);
        }
    }
    flush(&mut current, &mut messages);
    messages
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_of_a_simple_transcript() {
        let text = "<system>\nsys text\n</system>\n\n<user>\nquestion\n</user>\n\n<assistant>\nanswer\n</assistant>\n";
        let messages = parse_listing(text);
        assert_eq!(
            messages,
            vec![
                ChatMessage::system("sys text"),
                ChatMessage::user("question"),
                ChatMessage::assistant("answer"),
            ]
        );
    }

    #[test]
    fn typo_tags_and_unclosed_turns_are_tolerated() {
        let text = "<user>\nq1\n</user>\n<assitant>\na1\n</asistant>\n<user>\nq2\n<user>\n<assistant>\na2\n</assistant>\n";
        let messages = parse_listing(text);
        assert_eq!(
            messages,
            vec![
                ChatMessage::user("q1"),
                ChatMessage::assistant("a1"),
                ChatMessage::user("q2"),
                ChatMessage::assistant("a2"),
            ]
        );
    }

    #[test]
    fn internal_blank_lines_are_preserved() {
        let text = "<user>\nline one\n\nline two\n</user>\n";
        let messages = parse_listing(text);
        assert_eq!(messages, vec![ChatMessage::user("line one\n\nline two")]);
    }
}
