from .solve import run_query, solve_query, solve_shard

__all__ = ["run_query", "solve_query", "solve_shard"]
