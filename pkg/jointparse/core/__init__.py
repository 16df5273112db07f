"""Cross-cutting helpers: configuration, logging, error types."""
