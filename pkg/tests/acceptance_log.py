"""One result line per acceptance criterion, shown in the terminal summary."""

RESULTS = {}
