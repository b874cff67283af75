"""Endpoint routers for API version 1."""
