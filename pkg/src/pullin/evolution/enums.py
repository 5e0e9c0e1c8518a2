from enum import Enum, auto


class TerminalStatus(Enum):
    REACHED_HORIZON = auto()
    TOUCHDOWN = auto()
    ADMISSIBILITY_BREACH = auto()

    @property
    def label(self):
        return self.name.lower()
