c = get_config()  # noqa
c.ReprSolveTask.enabled = False
