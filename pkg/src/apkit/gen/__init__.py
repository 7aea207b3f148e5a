"""Artifact generators: SHACL, JSON Schema and Markdown docs."""
