use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use super::{Backend, BackendError, TranslationRequest, TranslationResult};

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOptions {
    pub max_inflight: usize,
    /// Requests per second; `None` is unlimited.
    pub rps: Option<f64>,
    /// Extra attempts for transient failures.
    pub retries: u32,
    /// First retry delay, doubled on every further attempt.
    pub backoff: Duration,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            max_inflight: 4,
            rps: None,
            retries: 3,
            backoff: Duration::from_millis(500),
        }
    }
}

/// Token bucket with a burst of one: requests are spaced `1/rps` apart.
#[derive(Debug)]
pub struct TokenBucket {
    interval: Duration,
    next: Mutex<Instant>,
}

impl TokenBucket {
    pub fn new(rps: f64) -> Self {
        TokenBucket {
            interval: Duration::from_secs_f64(1.0 / rps.max(1e-6)),
            next: Mutex::new(Instant::now()),
        }
    }

    /// Blocks until the caller may send.
    pub fn acquire(&self) {
        let wait = {
            let mut next = self.next.lock().unwrap_or_else(|e| e.into_inner());
            let now = Instant::now();
            let slot = (*next).max(now);
            *next = slot + self.interval;
            slot - now
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }
    }
}

fn translate_with_retries(
    backend: &dyn Backend,
    request: &TranslationRequest,
    options: &BatchOptions,
    bucket: Option<&TokenBucket>,
) -> TranslationResult {
    let started = Instant::now();
    let mut attempt = 0;
    let outcome = loop {
        if let Some(bucket) = bucket {
            bucket.acquire();
        }
        match backend.translate(request) {
            Err(e) if e.is_transient() && attempt < options.retries => {
                std::thread::sleep(options.backoff * 2u32.saturating_pow(attempt));
                attempt += 1;
            }
            other => break other,
        }
    };
    let latency_ms = backend.is_remote().then(|| started.elapsed().as_millis() as u64);
    let (output, error) = match outcome {
        Ok(text) => (Some(text), None),
        Err(e) => (None, Some(e.to_string())),
    };
    TranslationResult {
        case_id: request.case_id.clone(),
        backend: backend.id(),
        output,
        error,
        latency_ms,
    }
}

/// Translates every request, keeping the input order. Per-request failures
/// become error results; only a failed preflight aborts the batch.
pub fn translate_batch(
    backend: &dyn Backend,
    requests: &[TranslationRequest],
    options: &BatchOptions,
) -> Result<Vec<TranslationResult>, BackendError> {
    backend.preflight()?;
    let bucket = options.rps.map(TokenBucket::new);
    let slots: Vec<Mutex<Option<TranslationResult>>> = requests.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = options.max_inflight.clamp(1, requests.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(request) = requests.get(i) else { break };
                let result = translate_with_retries(backend, request, options, bucket.as_ref());
                *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(result);
            });
        }
    });

    Ok(slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .unwrap_or_else(|e| e.into_inner())
                .expect("every request is processed")
        })
        .collect())
}
