import hypothesis

hypothesis.settings.register_profile(
    "suite",
    deadline=None,  # wall-time varies too much across machines for a deadline
    max_examples=50,
    derandomize=True,
)
hypothesis.settings.load_profile("suite")
