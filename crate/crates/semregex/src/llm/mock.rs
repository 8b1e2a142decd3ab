use std::sync::Mutex;

use super::{ChatProvider, ChatRequest, ChatResponse, LlmError, Provenance, Role, Usage};

/// Deterministic scripted provider for tests. Rules are tried in order
/// against the last user message; the first whose pattern is a substring of
/// that message wins. A rule with a `None` pattern matches anything, so a
/// trailing default can be expressed as `.default(...)`.
pub struct ScriptedMock {
    rules: Vec<(Option<String>, String)>,
    /// Transcript of every request served, for asserting on prompts.
    pub served: Mutex<Vec<ChatRequest>>,
}

impl ScriptedMock {
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        ScriptedMock { rules: Vec::new(), served: Mutex::new(Vec::new()) }
    }

    pub fn rule(mut self, pattern: impl Into<String>, reply: impl Into<String>) -> Self {
        self.rules.push((Some(pattern.into()), reply.into()));
        self
    }

    pub fn default(mut self, reply: impl Into<String>) -> Self {
        self.rules.push((None, reply.into()));
        self
    }

    fn respond(&self, request: &ChatRequest, content: String) -> ChatResponse {
        ChatResponse {
            content,
            usage: Usage::default(),
            provenance: Provenance {
                provider: self.id().to_string(),
                model: request.model.clone(),
                request_hash: request.hash(),
            },
        }
    }
}

fn last_user_message(request: &ChatRequest) -> &str {
    request
        .messages
        .iter()
        .rev()
        .find(|m| m.role == Role::User)
        .map(|m| m.content.as_str())
        .unwrap_or("")
}

impl ChatProvider for ScriptedMock {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, LlmError> {
        self.served.lock().unwrap().push(request.clone());
        let haystack = last_user_message(request);
        for (pattern, reply) in &self.rules {
            let hit = match pattern {
                Some(p) => haystack.contains(p.as_str()),
                None => true,
            };
            if hit {
                return Ok(self.respond(request, reply.clone()));
            }
        }
        let head: String = haystack.chars().take(120).collect();
        Err(LlmError::MockMiss { context: head })
    }

    fn id(&self) -> &str {
        "mock:scripted"
    }
}

/// Mock provider backed by an arbitrary closure over the full request.
/// Useful for oracle evaluators that parse the prompt and answer from
/// ground truth rather than a fixed script.
pub struct MockFn<F>
where
    F: Fn(&ChatRequest) -> Result<String, LlmError> + Send + Sync,
{
    f: F,
}

impl<F> MockFn<F>
where
    F: Fn(&ChatRequest) -> Result<String, LlmError> + Send + Sync,
{
    pub fn new(f: F) -> Self {
        MockFn { f }
    }
}

impl<F> ChatProvider for MockFn<F>
where
    F: Fn(&ChatRequest) -> Result<String, LlmError> + Send + Sync,
{
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, LlmError> {
        let content = (self.f)(request)?;
        Ok(ChatResponse {
            content,
            usage: Usage::default(),
            provenance: Provenance {
                provider: self.id().to_string(),
                model: request.model.clone(),
                request_hash: request.hash(),
            },
        })
    }

    fn id(&self) -> &str {
        "mock:fn"
    }
}
