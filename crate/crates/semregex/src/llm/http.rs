use std::thread;
use std::time::Duration;

use serde::Deserialize;

use super::{ChatProvider, ChatRequest, ChatResponse, LlmError, Provenance, Usage};

/// Exponential backoff for transient failures (network errors, HTTP 429,
/// and 5xx).
#[derive(Debug, Clone)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub initial_delay: Duration,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 5,
            initial_delay: Duration::from_millis(500),
            max_delay: Duration::from_secs(16),
        }
    }
}

/// Remote chat-completions provider. POSTs the request JSON to
/// `{base_url}/chat/completions` with a bearer token taken from
/// `api_key_env`.
pub struct HttpProvider {
    pub base_url: String,
    pub api_key_env: String,
    pub retry: RetryPolicy,
    client: reqwest::blocking::Client,
    id: String,
}

impl HttpProvider {
    pub fn new(base_url: impl Into<String>, api_key_env: impl Into<String>) -> Self {
        let base_url = base_url.into();
        let id = format!("http:{base_url}");
        HttpProvider {
            base_url,
            api_key_env: api_key_env.into(),
            retry: RetryPolicy::default(),
            client: reqwest::blocking::Client::new(),
            id,
        }
    }

    fn attempt(&self, request: &ChatRequest) -> Result<ChatResponse, AttemptError> {
        let url = format!("{}/chat/completions", self.base_url.trim_end_matches('/'));
        let mut builder = self.client.post(&url).json(request);
        if let Ok(key) = std::env::var(&self.api_key_env) {
            builder = builder.bearer_auth(key);
        }
        let response = builder.send().map_err(|e| AttemptError::Transient(e.to_string()))?;
        let status = response.status();
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(AttemptError::Transient(format!("HTTP {status}")));
        }
        if !status.is_success() {
            return Err(AttemptError::Fatal(format!("HTTP {status}")));
        }
        let body: WireResponse =
            response.json().map_err(|e| AttemptError::Fatal(e.to_string()))?;
        let choice = body
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| AttemptError::Fatal("response had no choices".to_string()))?;
        Ok(ChatResponse {
            content: choice.message.content,
            usage: Usage {
                prompt_tokens: body.usage.as_ref().map_or(0, |u| u.prompt_tokens),
                completion_tokens: body.usage.as_ref().map_or(0, |u| u.completion_tokens),
            },
            provenance: Provenance {
                provider: self.id.clone(),
                model: request.model.clone(),
                request_hash: request.hash(),
            },
        })
    }
}

enum AttemptError {
    Transient(String),
    Fatal(String),
}

impl ChatProvider for HttpProvider {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, LlmError> {
        let mut delay = self.retry.initial_delay;
        let mut last = String::new();
        for attempt in 1..=self.retry.max_attempts {
            match self.attempt(request) {
                Ok(response) => return Ok(response),
                Err(AttemptError::Fatal(message)) => return Err(LlmError::Protocol(message)),
                Err(AttemptError::Transient(message)) => {
                    last = message;
                    if attempt < self.retry.max_attempts {
                        thread::sleep(delay);
                        delay = (delay * 2).min(self.retry.max_delay);
                    }
                }
            }
        }
        Err(LlmError::Exhausted { attempts: self.retry.max_attempts, message: last })
    }

    fn id(&self) -> &str {
        &self.id
    }
}

#[derive(Debug, Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    usage: Option<WireUsage>,
}

#[derive(Debug, Deserialize)]
struct WireChoice {
    message: WireMessage,
}

#[derive(Debug, Deserialize)]
struct WireMessage {
    content: String,
}

#[derive(Debug, Deserialize)]
struct WireUsage {
    prompt_tokens: u64,
    completion_tokens: u64,
}
