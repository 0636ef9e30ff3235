"""Link-level Monte Carlo comparison of cell-free massive MIMO and
RIS-aided downlinks over a shared square service area."""

__version__ = "0.1.0"
