"""Monte Carlo ensembles of pre- and postselected runs."""
