"""Tests por bounded context (domain / application / infrastructure)."""
