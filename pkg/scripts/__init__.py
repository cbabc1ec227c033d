# Package marker for CLI scripts.
