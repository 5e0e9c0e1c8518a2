class MaximumPrincipleWarning(UserWarning):
    pass


class InitialLayerWarning(UserWarning):
    pass
