"""Low level number-crunching kernels, free of the high level domain types."""
