from typing import Final
from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from avis.misc import EnvKeys, SingletonMeta


class Database(metaclass=SingletonMeta):
    BASE: Final = declarative_base()

    def __init__(self, url: str | None = None):
        self.__url = url or EnvKeys.DATABASE_URL
        self.__engine = create_engine(self.__url)
        session = sessionmaker(bind=self.__engine)
        self.__session = session()

    @property
    def session(self):
        return self.__session

    @property
    def engine(self):
        return self.__engine

    @property
    def url(self) -> str:
        return self.__url
