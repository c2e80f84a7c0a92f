from avis.database.main import Database
