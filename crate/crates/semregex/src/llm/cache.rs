use std::fs;
use std::path::PathBuf;

use super::{ChatProvider, ChatRequest, ChatResponse, LlmError};

/// Disk cache over an inner provider. Responses are stored verbatim as
/// JSON files named by the request hash, before any output parsing, so
/// extraction bugs can be fixed without re-spending tokens. With no inner
/// provider the cache runs replay-only and a miss is an error.
pub struct DiskCacheProvider {
    dir: PathBuf,
    inner: Option<Box<dyn ChatProvider>>,
    id: String,
}

impl DiskCacheProvider {
    pub fn new(dir: impl Into<PathBuf>, inner: Option<Box<dyn ChatProvider>>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let id = match &inner {
            Some(p) => format!("cache({})", p.id()),
            None => "cache(replay-only)".to_string(),
        };
        Ok(DiskCacheProvider { dir, inner, id })
    }

    pub fn replay_only(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        Self::new(dir, None)
    }

    fn path_for(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("{hash}.json"))
    }

    fn lookup(&self, hash: &str) -> Result<Option<ChatResponse>, LlmError> {
        match fs::read_to_string(self.path_for(hash)) {
            Ok(body) => {
                let response: ChatResponse = serde_json::from_str(&body)
                    .map_err(|e| LlmError::Protocol(format!("corrupt cache entry {hash}: {e}")))?;
                Ok(Some(response))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn store(&self, hash: &str, response: &ChatResponse) -> Result<(), LlmError> {
        let body = serde_json::to_string_pretty(response)
            .map_err(|e| LlmError::Protocol(e.to_string()))?;
        // Idempotent concurrent writes: write to a unique temp file, then
        // rename over the final name.
        let tmp = self.dir.join(format!(
            "{hash}.tmp.{}.{:?}",
            std::process::id(),
            std::thread::current().id()
        ));
        fs::write(&tmp, body)?;
        fs::rename(&tmp, self.path_for(hash))?;
        Ok(())
    }
}

impl ChatProvider for DiskCacheProvider {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, LlmError> {
        let hash = request.hash();
        if let Some(hit) = self.lookup(&hash)? {
            return Ok(hit);
        }
        match &self.inner {
            Some(provider) => {
                let response = provider.complete(request)?;
                self.store(&hash, &response)?;
                Ok(response)
            }
            None => Err(LlmError::ReplayMiss { request_hash: hash }),
        }
    }

    fn id(&self) -> &str {
        &self.id
    }
}
