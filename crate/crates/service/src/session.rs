use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use chrono::{DateTime, Utc};
use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use pcrank_core::{PcMatrix, Revision};

use crate::error::ApiError;

pub const MIN_CONCEPTS: usize = 2;
pub const MAX_CONCEPTS: usize = 25;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Session {
    pub id: String,
    pub matrix: PcMatrix,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
    /// Suggested revisions that were applied, oldest first.
    pub history: Vec<Revision>,
}

/// Sessions keyed by id, each behind its own lock. With a snapshot directory
/// every session is written to `<dir>/<id>.json` after creation and after
/// each mutation, and reloaded on open.
#[derive(Default)]
pub struct SessionStore {
    sessions: DashMap<String, Arc<RwLock<Session>>>,
    snapshot_dir: Option<PathBuf>,
}

impl SessionStore {
    pub fn open(snapshot_dir: Option<PathBuf>) -> std::io::Result<Self> {
        let store = Self {
            sessions: DashMap::new(),
            snapshot_dir,
        };
        if let Some(dir) = &store.snapshot_dir {
            fs::create_dir_all(dir)?;
            for entry in fs::read_dir(dir)? {
                let path = entry?.path();
                if path.extension().and_then(|e| e.to_str()) != Some("json") {
                    continue;
                }
                let text = fs::read_to_string(&path)?;
                match serde_json::from_str::<Session>(&text) {
                    Ok(s) => {
                        store.sessions.insert(s.id.clone(), Arc::new(RwLock::new(s)));
                    }
                    Err(e) => eprintln!("skipping snapshot {}: {e}", path.display()),
                }
            }
        }
        Ok(store)
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    /// New session over the all-ones matrix (every pair judged equal).
    pub fn create(&self, n: usize, labels: Option<Vec<String>>) -> Result<Session, ApiError> {
        if !(MIN_CONCEPTS..=MAX_CONCEPTS).contains(&n) {
            return Err(ApiError::bad_request(format!(
                "n must lie in {MIN_CONCEPTS}..={MAX_CONCEPTS}, got {n}"
            )));
        }
        let matrix = PcMatrix::ones_labeled(n, labels)?;
        let now = Utc::now();
        let session = Session {
            id: Uuid::new_v4().simple().to_string(),
            matrix,
            created_at: now,
            updated_at: now,
            history: Vec::new(),
        };
        self.snapshot(&session);
        self.sessions
            .insert(session.id.clone(), Arc::new(RwLock::new(session.clone())));
        Ok(session)
    }

    fn get(&self, id: &str) -> Result<Arc<RwLock<Session>>, ApiError> {
        self.sessions
            .get(id)
            .map(|s| Arc::clone(s.value()))
            .ok_or_else(|| ApiError::not_found(id))
    }

    pub fn read<T>(&self, id: &str, f: impl FnOnce(&Session) -> T) -> Result<T, ApiError> {
        let session = self.get(id)?;
        let guard = session.read().map_err(|_| ApiError::internal("session lock poisoned"))?;
        Ok(f(&guard))
    }

    /// Runs `f` with exclusive access. Changes made by `f` are kept only
    /// when it succeeds.
    pub fn update<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<T, ApiError>,
    ) -> Result<T, ApiError> {
        let session = self.get(id)?;
        let mut guard = session
            .write()
            .map_err(|_| ApiError::internal("session lock poisoned"))?;
        let mut draft = guard.clone();
        let out = f(&mut draft)?;
        draft.updated_at = Utc::now();
        self.snapshot(&draft);
        *guard = draft;
        Ok(out)
    }

    fn snapshot(&self, session: &Session) {
        let Some(dir) = &self.snapshot_dir else { return };
        let path = dir.join(format!("{}.json", session.id));
        let text = serde_json::to_string_pretty(session).expect("session serialisation");
        if let Err(e) = fs::write(&path, text) {
            eprintln!("failed to write snapshot {}: {e}", path.display());
        }
    }
}
