from app.commands import dispatch, export, plan, suggest_days, validate

COMMANDS = [validate, plan, dispatch, export, suggest_days]

__all__ = ["COMMANDS"]
