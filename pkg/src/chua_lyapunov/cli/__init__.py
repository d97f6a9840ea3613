"""Command-line interface: config ingestion, subcommands, sweeps."""
