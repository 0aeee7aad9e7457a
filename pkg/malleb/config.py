"""
Engine configuration loaded from the environment
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Engine configuration
ENGINE_CONFIG = {
    'element_cap': int(os.getenv('MALLEB_ELEMENT_CAP', 2 ** 21)),
    'burnside_cap': int(os.getenv('MALLEB_BURNSIDE_CAP', 2 ** 20)),
    'local_cap': int(os.getenv('MALLEB_LOCAL_CAP', 2 ** 22)),
    'jobs': int(os.getenv('MALLEB_JOBS', 1)),
    'log_level': os.getenv('MALLEB_LOG_LEVEL', 'WARNING').upper(),
    'output': os.getenv('MALLEB_OUTPUT', 'json').lower(),
}
