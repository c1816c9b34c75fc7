//! Toolkit for LLM-driven tonal color grading pipelines.
//!
//! The library covers the offline side of a teacher/student tool-invocation
//! setup: the typed schema for the three grading tools, prompt templating and
//! robust parsing of model output, a deterministic grading engine, dataset
//! curation from interaction logs, offline evaluation metrics, and a
//! mistake-driven augmentation loop. Model endpoints stay external and are
//! reached through pluggable clients (with deterministic stubs for tests).

pub mod augment;
pub mod client;
pub mod config;
pub mod dataset;
pub mod engine;
pub mod eval;
pub mod llm_io;
pub mod rng;
pub mod tool_schema;
