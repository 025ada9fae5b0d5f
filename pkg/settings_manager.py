# settings_manager.py
import copy
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import ujson

# Sections whose integer values are budgets and must stay positive
BUDGET_SECTIONS = ('search', 'powers', 'witness', 'plot')


class SettingsManager:
    """Centralized search budgets and rendering settings"""

    _instance = None

    def __new__(cls, settings_file=None):
        """One manager per process; reset_settings swaps it"""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
            cls._instance.settings = {}
        return cls._instance

    def __init__(self, settings_file=None):
        if not self._initialized:
            self.settings_file = self._get_settings_file_path(settings_file)
            self.settings = self._load_settings()
            self._initialized = True
            logging.debug(f"Budgets ready (override file: {self.settings_file})")

    def _get_settings_file_path(self, settings_file=None) -> Path:
        """Explicit path, else PLOI_SETTINGS_FILE"""
        if settings_file:
            return Path(settings_file)
        from config import PLOI_SETTINGS_FILE
        return Path(PLOI_SETTINGS_FILE)

    def _get_default_settings(self) -> Dict[str, Any]:
        """Built-in budgets; every search falls back to these"""
        return {
            "version": "1",

            # Word balls and bounded searches
            "search": {
                "radius": 3,
                "max_word_length": 8,
                "max_elements": 20000,
                "tower_height": 6,
                "nonsolvable_threshold": 3,
                "commutator_samples": 64,
            },

            # Power escalation
            "powers": {
                "max_power": 2 ** 20,
                "efficiency_cap": 64,
                "max_stages": 12,
                "max_retries": 8,
            },

            # W_n witness extraction
            "witness": {
                "heights": 3,
                "conjugator_power": 8,
                "conjugator_radius": 3,
            },

            "plot": {
                "width": 480,
                "height": 480,
                "margin": 24,
            },

            "advanced": {
                "debug_logging": False,
            },
        }

    def _load_settings(self) -> Dict[str, Any]:
        """Defaults merged with the override file when it exists; nothing is written"""
        defaults = self._get_default_settings()
        if not self.settings_file.exists():
            return defaults

        try:
            override = ujson.loads(self.settings_file.read_text(encoding='utf-8'))
            if not isinstance(override, dict):
                raise ValueError("top level must be an object")
            merged = self._deep_merge(defaults, override)
            logging.info(f"📁 Budget overrides read from {self.settings_file}")
            return merged

        except Exception as e:
            logging.error(f"❌ Unreadable settings file {self.settings_file}: {e}")
            logging.info("Falling back to built-in budgets")
            return defaults

    def _deep_merge(self, default: Dict, loaded: Dict) -> Dict:
        """Nested sections merge key by key; anything else replaces"""
        result = copy.deepcopy(default)

        for key, value in loaded.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._deep_merge(result[key], value)
            else:
                result[key] = value

        return result

    def _save_settings(self):
        try:
            self.settings_file.parent.mkdir(parents=True, exist_ok=True)
            self.settings_file.write_text(
                ujson.dumps(self.settings, indent=2, sort_keys=True) + "\n", encoding='utf-8')
            logging.info(f"📁 Settings saved: {self.settings_file}")
        except Exception as e:
            logging.error(f"❌ Could not write {self.settings_file}: {e}")

    def get(self, key_path: str, default: Any = None) -> Any:
        """Dotted lookup, e.g. get("powers.max_power")"""
        value = self.settings
        try:
            for key in key_path.split('.'):
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key_path: str, value: Any, save: bool = False):
        """Dotted assignment; only written to disk with save=True"""
        *parents, leaf = key_path.split('.')
        section = self.settings
        for key in parents:
            section = section.setdefault(key, {})
        section[leaf] = value

        if save:
            self._save_settings()

    def validate_settings(self) -> bool:
        """Required sections present and every budget a positive integer"""
        for section in BUDGET_SECTIONS + ('advanced',):
            if not isinstance(self.settings.get(section), dict):
                logging.warning(f"⚠️ Settings section {section} is missing or not an object")
                return False

        for section in BUDGET_SECTIONS:
            for key, value in self.settings[section].items():
                if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
                    logging.warning(f"⚠️ Budget {section}.{key} must be a positive integer, got {value!r}")
                    return False

        return True


# Process-wide manager
_settings_manager: Optional[SettingsManager] = None


def get_settings() -> SettingsManager:
    """Current manager, created from PLOI_SETTINGS_FILE on first use"""
    global _settings_manager
    if _settings_manager is None:
        _settings_manager = SettingsManager()
    return _settings_manager


def reset_settings(settings_file=None) -> SettingsManager:
    """Drop the singleton and reload, optionally from another file"""
    global _settings_manager
    SettingsManager._instance = None
    _settings_manager = SettingsManager(settings_file)
    return _settings_manager


def get_setting(key_path: str, default: Any = None) -> Any:
    """get_settings().get shortcut"""
    return get_settings().get(key_path, default)


def set_setting(key_path: str, value: Any, save: bool = False):
    """get_settings().set shortcut"""
    get_settings().set(key_path, value, save)
