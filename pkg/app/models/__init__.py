# Pydantic models for the laboratory's domain types
