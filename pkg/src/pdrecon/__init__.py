"""Power domination and its reconfiguration graphs."""
