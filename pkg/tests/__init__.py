'''Intentionally empty. The pytest suite lives alongside this file; see https://docs.python.org/3/tutorial/modules.html#packages'''
