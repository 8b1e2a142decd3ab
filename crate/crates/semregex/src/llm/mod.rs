//! Chat-completion client used by the explainer and evaluator roles.
//!
//! One trait, three providers: a remote HTTP provider speaking the
//! de-facto chat-completions JSON shape, a disk cache that can wrap any
//! provider (or run replay-only), and a scripted mock for deterministic
//! tests. Responses are cached verbatim keyed by a hash of the request's
//! semantic fields, so a pipeline run against a warm cache is
//! bit-reproducible.

mod cache;
mod http;
mod mock;

pub use cache::DiskCacheProvider;
pub use http::{HttpProvider, RetryPolicy};
pub use mock::{MockFn, ScriptedMock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::Assistant, content: content.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub top_p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
}

impl ChatRequest {
    /// Hash of the request's semantic fields (model, messages,
    /// temperature, top_p, max_tokens) and nothing else. Provider identity
    /// and base URL deliberately do not participate.
    pub fn hash(&self) -> String {
        let canonical = serde_json::json!({
            "model": self.model,
            "messages": self.messages,
            "temperature": self.temperature,
            "top_p": self.top_p,
            "max_tokens": self.max_tokens,
        });
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(&canonical).expect("request serializes"));
        hex::encode(hasher.finalize())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub provider: String,
    pub model: String,
    pub request_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub content: String,
    pub usage: Usage,
    pub provenance: Provenance,
}

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("provider request failed after {attempts} attempts: {message}")]
    Exhausted { attempts: u32, message: String },
    #[error("no scripted response matches the request (test fixture gap): {context}")]
    MockMiss { context: String },
    #[error("cache miss in replay-only mode for request {request_hash}")]
    ReplayMiss { request_hash: String },
    #[error("provider protocol error: {0}")]
    Protocol(String),
    #[error("cache i/o: {0}")]
    Cache(#[from] std::io::Error),
}

/// A chat-completion backend.
pub trait ChatProvider: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, LlmError>;
    fn id(&self) -> &str;
}
