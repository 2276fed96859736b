#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026
import logging
import os

from jinja2 import Environment, FileSystemLoader

# Path to folders
path_to_data = os.path.join(os.path.dirname(__file__), 'data')
path_to_templates = os.path.join(os.path.dirname(__file__), 'templates')

# Embedded transcription of the classification tables, overridable through the environment
oracle_filename = 'oracle_tables.tsv'
oracle_env_variable = 'NHTOPO_ORACLE'

# Numerical tolerances
UNITARY_TOL = 1e-12
HERMITIAN_TOL = 1e-10
GAP_TOL = 1e-8
QUANTIZATION_TOL = 0.05
DEFAULT_STEPS = 11

logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.INFO, format='%(asctime)s [%(levelname)s](%(name)s) %(message)s')


def oracle_path(filepath: str | None = None) -> str:
    """
    Resolve the path of the oracle tables: explicit argument first, then the
    ``NHTOPO_ORACLE`` environment variable, then the embedded data file.

    :param filepath: explicit path or None
    :return: path to a tab separated oracle file
    """
    if filepath:
        return filepath
    return os.environ.get(oracle_env_variable) or os.path.join(path_to_data, oracle_filename)


def render_template(template_name: str, context: dict) -> str:
    """Render one of the bundled jinja2 templates

    :param template_name: file name inside the templates folder
    :param context: variables available to the template
    :return: rendered text
    """
    env = Environment(loader=FileSystemLoader(path_to_templates), trim_blocks=True, lstrip_blocks=True)
    template = env.get_template(template_name)
    return template.render(context)


def save_report(content: str, filepath: str) -> None:
    """Save a rendered report to a file

    :param content: text to write
    :param filepath: path to save the report
    """
    ensure_dir(os.path.dirname(os.path.abspath(filepath)))
    with open(filepath, 'w', encoding='utf-8') as file:
        file.write(content)
        logger.info(f'🎉 Report generated successfully on {filepath}')


def ensure_dir(dir_path: str) -> None:
    """Ensures that the directory exists

    :param dir_path: path to the directory

    :example:
    >>> ensure_dir('results/tables')
    """
    if not os.path.exists(dir_path):
        os.makedirs(dir_path)
