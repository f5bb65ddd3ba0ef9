"""Matrix file formats and run artifact writers."""
