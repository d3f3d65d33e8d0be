import time
from typing import Optional

from opacsyn.log import HasLogger, LoggedError
from opacsyn.input import HasDefaults
from opacsyn.tools import check_known_keys
from opacsyn.typing import InfoDictIn, empty_dict


class Timer:
    def __init__(self):
        self._time_func = getattr(time, "perf_counter", time.time)
        self._start = None
        self.laps = {}

    def start(self):
        self._start = self._time_func()

    def lap(self, label, logger=None):
        """Records the time since the last start/lap under ``label``."""
        now = self._time_func()
        delta_time = now - self._start
        self.laps[label] = self.laps.get(label, 0.) + delta_time
        self._start = now
        if logger:
            logger.debug("%s took %g s", label, delta_time)
        return delta_time


class OpacsynComponent(HasLogger, HasDefaults):
    """
    Base class for a component with an associated .yaml defaults file
    that can set attributes.
    """

    def __init__(self, info: InfoDictIn = empty_dict,
                 name: Optional[str] = None,
                 timing: Optional[bool] = None,
                 initialize=True):
        self._name = name or self.get_qualified_class_name()
        self.set_logger(name=self._name)
        default_info = self.get_defaults()
        check_known_keys(self.log, info, list(default_info),
                         "the options of %s" % self._name)
        default_info.update(info)
        # set attributes from the info (from yaml file or directly input dictionary)
        for k, value in default_info.items():
            try:
                setattr(self, k, value)
            except AttributeError:
                raise AttributeError("Cannot set {} attribute for {}!".format(k, self))
        self.options = default_info
        self.set_timing_on(timing)
        if initialize:
            self.initialize()

    def set_timing_on(self, on):
        self.timer = Timer() if on else None

    def get_name(self) -> str:
        """
        Get the name. This is usually the class name.

        :return: name string
        """
        return self._name

    def __repr__(self):
        return self.get_name()

    def initialize(self):
        """
        Initializes the class (called from __init__, after the options are set).
        """
        pass

    def check_option_type(self, option, kind):
        value = getattr(self, option)
        if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
            raise LoggedError(self.log, "Option '%s' must be of type %s, got %r.",
                              option, getattr(kind, "__name__", kind), value)
