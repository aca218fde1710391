import json
import logging
import os

from elatlab.config.settings import settings

logger = logging.getLogger(__name__)


class MessageCatalog:
    """Report headings, verdict labels and check claims, one JSON file per language."""

    def __init__(self):
        self.messages = {}
        self.load_messages()

    def load_messages(self):
        """Load message files"""
        messages_dir = os.path.join(os.path.dirname(__file__), '..', 'messages')

        for lang in settings.supported_languages:
            message_file = os.path.join(messages_dir, f'{lang}.json')
            if os.path.exists(message_file):
                with open(message_file, 'r', encoding='utf-8') as f:
                    self.messages[lang] = json.load(f)
            else:
                logger.warning(f"No message file for language {lang}")
                self.messages[lang] = {}

    def get_text(self, key: str, language: str = None, **kwargs) -> str:
        """Get message text, falling back to the key itself"""
        language = language or settings.report_language
        if language not in self.messages:
            language = "en"

        text = self.messages.get(language, {}).get(key, key)

        # Format with provided arguments
        if kwargs:
            try:
                text = text.format(**kwargs)
            except (KeyError, ValueError):
                logger.debug(f"Could not format message {key} with {sorted(kwargs)}")

        return text


# Global instance
messages = MessageCatalog()
