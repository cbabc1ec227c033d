from app.jobs.handlers.classify import run as classify_handler
from app.jobs.handlers.decide import run as decide_handler
from app.jobs.handlers.local_number import run as local_number_handler
from app.jobs.handlers.optimal_check import run as optimal_check_handler
from app.jobs.handlers.orbit_count import run as orbit_count_handler
from app.jobs.handlers.regrep import run as regrep_handler
from app.jobs.handlers.sandwich import run as sandwich_handler
from app.jobs.handlers.type_listing import run as type_listing_handler
from app.jobs.handlers.verify import run as verify_handler

# Register command handlers
peta_handler_job = {
    "optimal": optimal_check_handler,
    "regrep": regrep_handler,
    "count": orbit_count_handler,
    "classify": classify_handler,
    "local": local_number_handler,
    "decide": decide_handler,
    "sandwich": sandwich_handler,
    "types": type_listing_handler,
    "verify": verify_handler,
}

# Commands that run without an input document
TANPA_INPUT = {"verify"}


def get_handler(command: str):
    """Get handler function for a command"""
    return peta_handler_job.get(command)
