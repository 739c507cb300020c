'''Intentionally empty. The numerical library modules live alongside this file; see https://docs.python.org/3/tutorial/modules.html#packages'''
