import threading


class SingletonMeta(type):
    _instances: dict = {}
    _lock = threading.Lock()

    def __call__(cls, *args, **kwargs):
        with SingletonMeta._lock:
            if cls not in SingletonMeta._instances:
                SingletonMeta._instances[cls] = super().__call__(*args, **kwargs)
            return SingletonMeta._instances[cls]

    def drop(cls) -> None:
        """Forget the cached instance so the next call builds a fresh one."""
        with SingletonMeta._lock:
            SingletonMeta._instances.pop(cls, None)
