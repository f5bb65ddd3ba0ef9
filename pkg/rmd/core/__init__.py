"""Matrix primitives shared by every solver."""
