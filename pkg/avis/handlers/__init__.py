from avis.handlers.main import register_all_handlers
