from avis.misc.env import EnvKeys
from avis.misc.singleton import SingletonMeta
from avis.misc.config import AvisConfig
