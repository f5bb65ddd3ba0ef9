"""Problem generators, embedding helpers, metrics and file IO."""
