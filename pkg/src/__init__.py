"""Pre- and postselected weak-measurement simulator for Aharonov-Bohm interferometer scenarios."""
