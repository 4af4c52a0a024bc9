"""File adapters for graphs, query lists, and run reports."""
