from spikescope.cli import entry

entry()
