from fisher_noise import config  # noqa: F401
